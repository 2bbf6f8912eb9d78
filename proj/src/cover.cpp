#include "warplab/cover.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <set>
#include <utility>

#include "warplab/errors.hpp"
#include "warplab/numerics/rootfind.hpp"

namespace warplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ScanPoint {
  double param;  // r* for axis targets, r_J or J for point targets
  double dy, ds;
};

}  // namespace

StripPoint deck(const StripPoint& pt, long l) {
  return {pt.r, pt.y + kTwoPi * static_cast<double>(l)};
}

std::string to_string(DistanceMethod m) {
  switch (m) {
    case DistanceMethod::QuadratureBvp: return "quadrature-BVP";
    case DistanceMethod::ShootingBvp: return "shooting-BVP";
    case DistanceMethod::AxisPath: return "axis-path";
    case DistanceMethod::GridOracle: return "grid-oracle";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// L(l) = d(p~, gamma^l p~)
// ---------------------------------------------------------------------------

DistanceResult distance_axis(const WarpFamily& family, const WarpTable* table,
                             long l, double tol) {
  if (l < 0) throw InvalidInputError("distance_axis: l >= 0 required");
  if (!(tol > 0.0)) throw InvalidInputError("distance_axis: tol > 0");
  DistanceResult res;
  if (l == 0) {
    res.method = DistanceMethod::AxisPath;
    res.geodesic = RealizingGeodesic{0.0, 0, 0.0};
    return res;
  }

  const double h0 = eval_hbar(family, table, 0.0).h;
  const double y_target = kTwoPi * static_cast<double>(l);
  const double axis_length = y_target * h0;

  res.value = axis_length;
  res.method = DistanceMethod::AxisPath;
  res.geodesic = RealizingGeodesic{h0, 0, 0.0};

  const double quad_tol = std::max(tol * 1e-2, 1e-13);

  // scan the turning radius over (0, r_bar]: paths reaching farther than
  // half the current best candidate can never be minimal
  const double r_bar = axis_length / 2.0;
  std::set<double> grid_set;
  const int n_log = 48, n_lin = 160;
  for (int i = 0; i < n_log; ++i) {
    grid_set.insert(r_bar * std::pow(10.0, -7.0 + 7.0 * i / (n_log - 1)));
  }
  for (int i = 1; i <= n_lin; ++i) {
    grid_set.insert(r_bar * i / n_lin);
  }
  std::vector<ScanPoint> scan;
  scan.reserve(grid_set.size());
  int scan_failures = 0;
  for (double rs : grid_set) {
    try {
      const double J = eval_hbar(family, table, rs).h;
      const LegIntegrals leg =
          oscillation_leg(family, table, J, 0.0, rs, quad_tol, rs);
      scan.push_back({rs, 2.0 * leg.dy, 2.0 * leg.ds});
    } catch (const std::runtime_error&) {
      ++scan_failures;
    }
  }
  res.failed_branches += scan_failures;
  if (scan.size() < 2) {
    // no oscillating branch is available (e.g. flat family); axis path stands
    res.upper_bound = axis_length;
    res.lower_bound = 0.0;
    return res;
  }

  double dy_min = scan.front().dy;
  for (const auto& p : scan) dy_min = std::min(dy_min, p.dy);
  const long n_max =
      static_cast<long>(std::ceil(y_target / dy_min)) + 4;

  auto dy_at = [&](double rs) {
    const double J = eval_hbar(family, table, rs).h;
    return 2.0 * oscillation_leg(family, table, J, 0.0, rs, quad_tol, rs).dy;
  };

  bool osc_winner = false;
  int bounded_out_streak = 0;
  for (long n = 1; n <= n_max; ++n) {
    const double target = y_target / static_cast<double>(n);
    bool any_useful = false;
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
      const double g1 = scan[i].dy - target;
      const double g2 = scan[i + 1].dy - target;
      if (!(g1 == 0.0 || g1 * g2 < 0.0)) continue;
      double rs_root;
      try {
        rs_root = numerics::brent(
            [&](double rs) { return dy_at(rs) - target; }, scan[i].param,
            scan[i + 1].param, g1, g2, 1e-12 * (1.0 + r_bar),
            tol * 0.05 * target);
      } catch (const NumericalError&) {
        ++res.failed_branches;
        continue;
      }
      const double J = eval_hbar(family, table, rs_root).h;
      const LegIntegrals leg =
          oscillation_leg(family, table, J, 0.0, rs_root, quad_tol, rs_root);
      const double cand = static_cast<double>(n) * 2.0 * leg.ds;
      if (cand < res.value) {
        res.value = cand;
        res.method = DistanceMethod::QuadratureBvp;
        res.geodesic = RealizingGeodesic{J, n, rs_root};
        osc_winner = true;
      }
      // ds/dy >= J pointwise, so every branch with this root is at least
      // y_target * J long; larger n push J (hence the bound) upward
      if (y_target * J < res.value) any_useful = true;
    }
    bounded_out_streak = any_useful ? 0 : bounded_out_streak + 1;
    if (bounded_out_streak >= 8) break;
  }

  res.upper_bound = osc_winner ? res.value + tol : axis_length;
  res.lower_bound =
      osc_winner ? std::max(2.0 * res.geodesic->r_star, 0.0) : 0.0;
  res.lower_bound = std::min(res.lower_bound, res.value);
  return res;
}

// ---------------------------------------------------------------------------
// d(gamma^l p~, (t, 0))
// ---------------------------------------------------------------------------

namespace {

struct PointLegs {
  double A = 0.0, a = 0.0;  // fiber advance / length over [0, t]
  double B = 0.0, b = 0.0;  // fiber advance / length over [t, r_J]
};

PointLegs point_legs(const WarpFamily& family, const WarpTable* table,
                     double J, double t, double r_J, double quad_tol,
                     bool with_outer) {
  PointLegs out;
  const LegIntegrals inner =
      oscillation_leg(family, table, J, 0.0, t, quad_tol, r_J);
  out.A = inner.dy;
  out.a = inner.ds;
  if (with_outer) {
    const LegIntegrals outer =
        oscillation_leg(family, table, J, t, r_J, quad_tol, r_J);
    out.B = outer.dy;
    out.b = outer.ds;
  }
  return out;
}

}  // namespace

DistanceResult distance_axis_to_point(const WarpFamily& family,
                                      const WarpTable* table, long l,
                                      StripPoint target, double tol) {
  if (target.y != 0.0) {
    throw InvalidInputError(
        "distance_axis_to_point: unsupported query; the target must lie on "
        "the radial ray (t, 0)");
  }
  if (!(target.r >= 0.0) || !std::isfinite(target.r)) {
    throw InvalidInputError("distance_axis_to_point: need finite t >= 0");
  }
  if (l < 0) throw InvalidInputError("distance_axis_to_point: l >= 0");
  if (!(tol > 0.0)) throw InvalidInputError("distance_axis_to_point: tol > 0");

  const double t = target.r;
  if (t == 0.0) return distance_axis(family, table, l, tol);

  DistanceResult res;
  if (l == 0) {
    // the radial geodesic realizes the distance exactly
    res.value = res.lower_bound = res.upper_bound = t;
    res.method = DistanceMethod::ShootingBvp;
    res.geodesic = RealizingGeodesic{0.0, 0, 0.0};
    return res;
  }

  const double h_t = eval_warp(family, table, t).h;
  const double y_target = kTwoPi * static_cast<double>(l);
  const double beta = t + y_target * h_t;  // radial-then-parallel path

  res.value = beta;
  res.method = DistanceMethod::AxisPath;
  res.lower_bound = t;

  const double quad_tol = std::max(tol * 1e-2, 1e-13);
  const int n_scan = 96;
  bool branch_winner = false;

  // --- direct branch: first outward crossing of r = t, J in (0, h(t)) ---
  {
    std::vector<ScanPoint> scan;
    scan.push_back({0.0, 0.0, t});  // J -> 0: radial limit
    for (int i = 0; i < n_scan; ++i) {
      const double J = h_t * std::pow(10.0, -9.0 + 9.0 * i / (n_scan - 1)) *
                       (1.0 - 1e-9);
      try {
        const LegIntegrals leg =
            oscillation_leg(family, table, J, 0.0, t, quad_tol);
        scan.push_back({J, leg.dy, leg.ds});
      } catch (const std::runtime_error&) {
        ++res.failed_branches;
      }
    }
    auto y_of = [&](double J) {
      return oscillation_leg(family, table, J, 0.0, t, quad_tol).dy;
    };
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
      const double g1 = scan[i].dy - y_target;
      const double g2 = scan[i + 1].dy - y_target;
      if (!(g1 == 0.0 || g1 * g2 < 0.0)) continue;
      try {
        double lo = scan[i].param;
        double f_lo = g1;
        if (lo == 0.0) {
          // shrink into (0, J1) until the bracket is genuine
          lo = scan[i + 1].param;
          do {
            lo *= 1e-4;
            f_lo = y_of(lo) - y_target;
          } while (f_lo > 0.0 && lo > 1e-280);
          if (f_lo > 0.0) continue;
        }
        const double J_root = numerics::brent(
            [&](double J) { return y_of(J) - y_target; }, lo,
            scan[i + 1].param, f_lo, g2, 1e-16 * h_t,
            tol * 0.05 * y_target);
        const LegIntegrals leg =
            oscillation_leg(family, table, J_root, 0.0, t, quad_tol);
        if (leg.ds < res.value) {
          res.value = leg.ds;
          res.method = DistanceMethod::ShootingBvp;
          res.geodesic = RealizingGeodesic{J_root, 0, 0.0};
          branch_winner = true;
        }
      } catch (const std::runtime_error&) {
        ++res.failed_branches;
      }
    }
  }

  // --- lobed branches: q full lobes, then the out or in leg at r = t ---
  const double r_cap = 0.5 * (res.value + t) + 1.0;
  if (r_cap > t * (1.0 + 1e-12)) {
    std::vector<std::array<double, 5>> rows;  // r_J, A, a, B, b
    for (int i = 0; i < n_scan; ++i) {
      const double u = std::pow(10.0, -7.0 + 7.0 * i / (n_scan - 1));
      const double r_J = t + (r_cap - t) * u;
      const double J = eval_hbar(family, table, r_J).h;
      try {
        const PointLegs legs =
            point_legs(family, table, J, t, r_J, quad_tol, true);
        rows.push_back({r_J, legs.A, legs.a, legs.B, legs.b});
      } catch (const std::runtime_error&) {
        ++res.failed_branches;
      }
    }
    if (rows.size() >= 2) {
      double min_lobe = rows.front()[1] + rows.front()[3];
      for (const auto& r : rows) min_lobe = std::min(min_lobe, r[1] + r[3]);
      const long q_max =
          static_cast<long>(std::ceil(y_target / (2.0 * min_lobe))) + 2;
      for (long q = 0; q <= q_max; ++q) {
        if (2.0 * static_cast<double>(q) * t >= res.value) break;
        for (int in_leg = (q == 0 ? 1 : 0); in_leg <= 1; ++in_leg) {
          auto y_row = [&](const std::array<double, 5>& row) {
            return 2.0 * q * (row[1] + row[3]) + row[1] +
                   (in_leg ? 2.0 * row[3] : 0.0);
          };
          auto eval_branch = [&](double r_J) {
            const double J = eval_hbar(family, table, r_J).h;
            const PointLegs legs =
                point_legs(family, table, J, t, r_J, quad_tol, true);
            const double y = 2.0 * q * (legs.A + legs.B) + legs.A +
                             (in_leg ? 2.0 * legs.B : 0.0);
            const double s = 2.0 * q * (legs.a + legs.b) + legs.a +
                             (in_leg ? 2.0 * legs.b : 0.0);
            return std::pair<double, double>{y, s};
          };
          for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const double g1 = y_row(rows[i]) - y_target;
            const double g2 = y_row(rows[i + 1]) - y_target;
            if (!(g1 == 0.0 || g1 * g2 < 0.0)) continue;
            try {
              const double root = numerics::brent(
                  [&](double r_J) { return eval_branch(r_J).first - y_target; },
                  rows[i][0], rows[i + 1][0], g1, g2, 1e-12 * (1.0 + r_cap),
                  tol * 0.05 * y_target);
              const auto [y_val, s_val] = eval_branch(root);
              (void)y_val;
              if (s_val < res.value) {
                res.value = s_val;
                res.method = DistanceMethod::ShootingBvp;
                res.geodesic = RealizingGeodesic{
                    eval_hbar(family, table, root).h, q + in_leg, root};
                branch_winner = true;
              }
            } catch (const NumericalError&) {
              ++res.failed_branches;
            }
          }
        }
      }
    }
  }

  res.degraded = !branch_winner;
  res.upper_bound =
      branch_winner ? std::min(res.value + tol, beta) : beta;
  res.value = std::max(res.value, t);  // covering projection bound
  return res;
}

// ---------------------------------------------------------------------------
// Grid oracle
// ---------------------------------------------------------------------------

double grid_distance_oracle(const WarpFamily& family, const WarpTable* table,
                            StripPoint a, StripPoint b, double resolution) {
  if (!(resolution > 0.0)) {
    throw InvalidInputError("grid_distance_oracle: resolution > 0");
  }
  if (a.r < 0.0 || b.r < 0.0) {
    throw InvalidInputError("grid_distance_oracle: canonical r >= 0 required");
  }
  const double res = resolution;
  const double r_lo_metric = std::min(a.r, b.r);
  const double upper0 = std::abs(a.r - b.r) +
                        eval_warp(family, table, r_lo_metric).h *
                            std::abs(a.y - b.y);

  double R = std::max(a.r, b.r) + 0.5 * upper0 + 2.0 * res;
  const double y_lo = std::min(a.y, b.y) - 2.0 * res;
  const double y_hi = std::max(a.y, b.y) + 2.0 * res;

  for (int attempt = 0; attempt < 4; ++attempt) {
    const int nr = static_cast<int>(std::ceil(R / res)) + 1;
    const int ny = static_cast<int>(std::ceil((y_hi - y_lo) / res)) + 1;
    const auto node = [&](int i, int j) { return i * ny + j; };
    const int ia = static_cast<int>(std::lround(a.r / res));
    const int ja = static_cast<int>(std::lround((a.y - y_lo) / res));
    const int ib = static_cast<int>(std::lround(b.r / res));
    const int jb = static_cast<int>(std::lround((b.y - y_lo) / res));

    // h on the half-step lattice for midpoint-rule edge weights
    std::vector<double> h_half(2 * nr - 1);
    for (int i = 0; i < 2 * nr - 1; ++i) {
      h_half[i] = eval_warp(family, table, 0.5 * i * res).h;
    }

    // 32 coprime moves up to (3,2); the largest angular gap is 18.4 deg,
    // keeping the stencil anisotropy factor below 1.013
    static constexpr int kMoves[32][2] = {
        {1, 0},   {-1, 0},  {0, 1},   {0, -1},  {1, 1},   {1, -1},
        {-1, 1},  {-1, -1}, {2, 1},   {2, -1},  {-2, 1},  {-2, -1},
        {1, 2},   {1, -2},  {-1, 2},  {-1, -2}, {3, 1},   {3, -1},
        {-3, 1},  {-3, -1}, {1, 3},   {1, -3},  {-1, 3},  {-1, -3},
        {3, 2},   {3, -2},  {-3, 2},  {-3, -2}, {2, 3},   {2, -3},
        {-2, 3},  {-2, -3}};

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(nr) * ny, inf);
    std::vector<int> parent(static_cast<std::size_t>(nr) * ny, -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> heap;
    dist[node(ia, ja)] = 0.0;
    heap.push({0.0, node(ia, ja)});
    const int goal = node(ib, jb);

    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      if (u == goal) break;
      const int i = u / ny, j = u % ny;
      for (const auto& mv : kMoves) {
        const int i2 = i + mv[0], j2 = j + mv[1];
        if (i2 < 0 || i2 >= nr || j2 < 0 || j2 >= ny) continue;
        const double hm = h_half[i + i2];
        const double dr = mv[0] * res;
        const double dy = mv[1] * res;
        const double w = std::sqrt(dr * dr + hm * hm * dy * dy);
        const int v = node(i2, j2);
        if (dist[u] + w < dist[v]) {
          dist[v] = dist[u] + w;
          parent[v] = u;
          heap.push({dist[v], v});
        }
      }
    }

    if (!std::isfinite(dist[goal])) {
      throw NumericalError("grid_distance_oracle: target unreachable");
    }
    // enlarge-and-retry if the minimizer touches the outer radius
    bool touches = false;
    for (int v = goal; v != -1; v = parent[v]) {
      if (v / ny >= nr - 2) {
        touches = true;
        break;
      }
    }
    if (!touches) return dist[goal];
    R *= 1.5;
  }
  throw NumericalError(
      "grid_distance_oracle: window kept touching the boundary");
}

}  // namespace warplab
