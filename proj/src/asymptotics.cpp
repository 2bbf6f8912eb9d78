#include "warplab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "warplab/errors.hpp"
#include "warplab/numerics/parallel.hpp"

namespace warplab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

BusemannSeries busemann_estimate(const WarpFamily& family,
                                 const WarpTable* table, long l,
                                 std::span<const double> T_list, double tol,
                                 int parallel) {
  if (l < 0) throw InvalidInputError("busemann_estimate: l >= 0");
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    if (!(T_list[i] > 0.0) || (i > 0 && !(T_list[i] > T_list[i - 1]))) {
      throw InvalidInputError(
          "busemann_estimate: T_list must be positive and increasing");
    }
  }
  BusemannSeries series;
  series.l = l;
  series.rows.resize(T_list.size());
  numerics::parallel_for(T_list.size(), parallel, [&](std::size_t i) {
    const double T = T_list[i];
    BusemannRow row;
    row.T = T;
    row.bound_lo = -kTwoPi * static_cast<double>(l) *
                   eval_warp(family, table, T).h;
    const DistanceResult d =
        distance_axis_to_point(family, table, l, {T, 0.0}, tol);
    row.b_value = T - d.value;
    row.b_lo = T - d.upper_bound;
    row.b_hi = T - d.lower_bound;
    row.bound_only = d.degraded;
    series.rows[i] = row;
  });
  for (std::size_t i = 1; i < series.rows.size(); ++i) {
    if (series.rows[i].b_value < series.rows[i - 1].b_value) {
      series.monotone = false;
    }
  }
  return series;
}

NonProperCertificate nonproper_certificate(const WarpFamily& family,
                                           const WarpTable* table,
                                           std::span<const long> l_set,
                                           double T_max, double eps,
                                           double tol, int parallel) {
  if (!family.h_decays()) {
    throw InvalidInputError(
        "nonproper_certificate: family h does not decay; certificate "
        "inapplicable");
  }
  if (l_set.empty()) {
    throw InvalidInputError("nonproper_certificate: empty l set");
  }
  long l_max = 0;
  for (long l : l_set) {
    if (l < 0) throw InvalidInputError("nonproper_certificate: l >= 0");
    l_max = std::max(l_max, l);
  }
  const double guaranteed_width =
      kTwoPi * static_cast<double>(l_max) * eval_warp(family, table, T_max).h;
  if (!(eps > guaranteed_width)) {
    throw InvalidInputError(
        "nonproper_certificate: T_max too small for requested eps (the "
        "covering bound still allows width " + std::to_string(guaranteed_width) +
        ")");
  }

  NonProperCertificate cert;
  cert.family = family.name();
  cert.T_max = T_max;
  cert.epsilon = eps;
  cert.rows.resize(l_set.size());
  numerics::parallel_for(l_set.size(), parallel, [&](std::size_t i) {
    const long l = l_set[i];
    CertificateRow row;
    row.l = l;
    row.orbit_distance = distance_axis(family, table, l, tol);
    const DistanceResult d =
        distance_axis_to_point(family, table, l, {T_max, 0.0}, tol);
    row.b_lo = T_max - d.upper_bound;
    row.b_hi = T_max - d.lower_bound;
    row.bound_lo =
        -kTwoPi * static_cast<double>(l) * eval_warp(family, table, T_max).h;
    cert.rows[i] = row;
  });

  cert.L_strictly_increasing = true;
  for (std::size_t i = 1; i < cert.rows.size(); ++i) {
    if (!(cert.rows[i].orbit_distance.value >
          cert.rows[i - 1].orbit_distance.value)) {
      cert.L_strictly_increasing = false;
    }
  }
  cert.intervals_within_eps = true;
  for (const auto& row : cert.rows) {
    if (row.b_lo < -cert.epsilon || row.b_hi > 0.0) {
      cert.intervals_within_eps = false;
    }
  }
  cert.verdict = (cert.L_strictly_increasing && cert.intervals_within_eps)
                     ? "non-proper evidence"
                     : "inconclusive";
  return cert;
}

ConeProbeResult cone_probe(const WarpFamily& family, const WarpTable* table,
                           std::span<const long> l_list, double tol,
                           int parallel) {
  if (l_list.empty()) throw InvalidInputError("cone_probe: empty l list");
  for (std::size_t i = 0; i < l_list.size(); ++i) {
    if (l_list[i] <= 0) throw InvalidInputError("cone_probe: l must be >= 1");
    if (i > 0 && l_list[i] != 2 * l_list[i - 1]) {
      throw InvalidInputError("cone_probe: l list must be dyadic");
    }
  }
  std::vector<long> all(l_list.begin(), l_list.end());
  all.push_back(2 * l_list.back());

  std::vector<DistanceResult> dists(all.size());
  numerics::parallel_for(all.size(), parallel, [&](std::size_t i) {
    dists[i] = distance_axis(family, table, all[i], tol);
  });

  ConeProbeResult out;
  out.family = family.name();
  out.rows.resize(l_list.size());
  for (std::size_t i = 0; i < l_list.size(); ++i) {
    ConeRow row;
    row.l = l_list[i];
    row.L = dists[i].value;
    row.R = dists[i].geodesic ? dists[i].geodesic->r_star : 0.0;
    row.R_over_L = row.R / row.L;
    row.A = dists[i + 1].value / (2.0 * dists[i].value);
    out.rows[i] = row;
  }
  out.additivity_trend = true;
  out.ratio_trend = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const double gap_prev = 1.0 - out.rows[i - 1].A;
    const double gap_cur = 1.0 - out.rows[i].A;
    if (gap_cur > gap_prev + out.trend_tol) out.additivity_trend = false;
    if (out.rows[i].R_over_L >
        out.rows[i - 1].R_over_L + out.trend_tol) {
      out.ratio_trend = false;
    }
  }
  return out;
}

}  // namespace warplab
