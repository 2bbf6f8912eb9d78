#include "warplab/curvature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "warplab/errors.hpp"
#include "warplab/numerics/parallel.hpp"

namespace warplab {

namespace {

constexpr double kSeriesCrossover = 1e-3;

bool finite(const WarpSample& s) {
  return std::isfinite(s.f) && std::isfinite(s.fp) && std::isfinite(s.fpp) &&
         std::isfinite(s.h) && std::isfinite(s.hp) && std::isfinite(s.hpp);
}

}  // namespace

RicciSample ricci_closed(const WarpSample& s, int k) {
  if (k < 2) throw InvalidInputError("ricci_closed: requires k >= 2");
  if (!finite(s)) throw InvalidInputError("ricci_closed: non-finite sample");

  // The three quotients that degenerate to 0/0 at the axis:
  //   f''/f -> f'''(0),  [1-(f')^2]/f^2 -> -f'''(0),  f'h'/(fh) -> h''(0)/h(0)
  double q_ff, q_one_minus, q_fh;
  if (s.r == 0.0 || s.f == 0.0) {
    if (!s.fppp) {
      throw InvalidInputError(
          "ricci_closed: sample at r=0 without third derivative");
    }
    q_ff = *s.fppp;
    q_one_minus = -*s.fppp;
    q_fh = s.hpp / s.h;
  } else {
    q_ff = s.fpp / s.f;
    q_fh = (s.fp / s.h) * (s.hp / s.f);
    if (s.r < kSeriesCrossover && s.fppp) {
      // 1-(f')^2 loses precision to cancellation below the crossover
      q_one_minus = -*s.fppp;
    } else {
      q_one_minus = (1.0 - s.fp) * (1.0 + s.fp) / (s.f * s.f);
    }
  }

  RicciSample out;
  out.r = s.r;
  out.k = k;
  out.hh = -s.hpp / s.h - (k - 1) * q_ff;
  out.uu = -q_ff + (k - 2) * q_one_minus - q_fh;
  out.vv = -s.hpp / s.h - (k - 1) * q_fh;
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

namespace {

using Scalar = long double;  // double differencing needs the extra headroom
using Matrix = std::vector<std::vector<Scalar>>;

Matrix zeros(int n) { return Matrix(n, std::vector<Scalar>(n, 0.0L)); }

// Diagonal metric of dr^2 + f^2 ds_{k-1}^2 + h^2 ds_1^2 in coordinates
// (r, theta_1..theta_{k-1}, y); ds_{k-1}^2 in nested hyperspherical form.
std::vector<Scalar> metric_diag(const WarpFamily& family,
                                const WarpTable* table, int k,
                                const std::vector<Scalar>& x) {
  const int n = k + 1;
  const detail::WarpValueLd s = detail::eval_warp_ld(family, table, x[0]);
  std::vector<Scalar> d(n, 0.0L);
  d[0] = 1.0L;
  Scalar prod = 1.0L;
  for (int i = 1; i <= k - 1; ++i) {
    d[i] = s.f * s.f * prod;
    const Scalar si = std::sin(x[i]);
    prod *= si * si;
  }
  d[n - 1] = s.h * s.h;
  return d;
}

Matrix metric_full(const WarpFamily& family, const WarpTable* table, int k,
                   const std::vector<Scalar>& x) {
  const int n = k + 1;
  Matrix g = zeros(n);
  const auto d = metric_diag(family, table, k, x);
  for (int i = 0; i < n; ++i) g[i][i] = d[i];
  return g;
}

// Gauss-Jordan inverse with partial pivoting; throws on tiny pivots.
Matrix invert(Matrix a) {
  const int n = static_cast<int>(a.size());
  Matrix inv = zeros(n);
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0L;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (std::abs(a[pivot][col]) < 1e-14L) {
      throw NumericalError("ricci_fd_oracle: ill-conditioned metric inverse");
    }
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Scalar s = 1.0L / a[col][col];
    for (int j = 0; j < n; ++j) {
      a[col][j] *= s;
      inv[col][j] *= s;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const Scalar factor = a[row][col];
      if (factor == 0.0L) continue;
      for (int j = 0; j < n; ++j) {
        a[row][j] -= factor * a[col][j];
        inv[row][j] -= factor * inv[col][j];
      }
    }
  }
  return inv;
}

// Christoffel symbols Gamma^i_{jk} by central differences of the metric.
std::vector<Matrix> christoffel(const WarpFamily& family,
                                const WarpTable* table, int k,
                                const std::vector<Scalar>& x, Scalar step) {
  const int n = k + 1;
  // dg[c][a][b] = d g_ab / d x_c
  std::vector<Matrix> dg(n, zeros(n));
  std::vector<Scalar> xp = x;
  for (int c = 0; c < n; ++c) {
    xp[c] = x[c] + step;
    const Matrix gp = metric_full(family, table, k, xp);
    xp[c] = x[c] - step;
    const Matrix gm = metric_full(family, table, k, xp);
    xp[c] = x[c];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        dg[c][a][b] = (gp[a][b] - gm[a][b]) / (2.0L * step);
  }
  const Matrix ginv = invert(metric_full(family, table, k, x));
  std::vector<Matrix> gamma(n, zeros(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int m = j; m < n; ++m) {
        Scalar sum = 0.0L;
        for (int l = 0; l < n; ++l) {
          sum += ginv[i][l] * (dg[j][l][m] + dg[m][l][j] - dg[l][j][m]);
        }
        gamma[i][j][m] = 0.5L * sum;
        gamma[i][m][j] = gamma[i][j][m];
      }
    }
  }
  return gamma;
}

// Ric_{ij} = d_a Gamma^a_{ij} - d_i Gamma^a_{aj}
//          + Gamma^a_{ab} Gamma^b_{ij} - Gamma^a_{ib} Gamma^b_{aj}
Matrix ricci_tensor_fd(const WarpFamily& family, const WarpTable* table,
                       int k, const std::vector<Scalar>& x, Scalar step) {
  const int n = k + 1;
  const auto gamma = christoffel(family, table, k, x, step);
  // dgamma[c][i][j][m] = d Gamma^i_{jm} / d x_c
  std::vector<std::vector<Matrix>> dgamma(
      n, std::vector<Matrix>(n, zeros(n)));
  std::vector<Scalar> xp = x;
  for (int c = 0; c < n; ++c) {
    xp[c] = x[c] + step;
    const auto gp = christoffel(family, table, k, xp, step);
    xp[c] = x[c] - step;
    const auto gm = christoffel(family, table, k, xp, step);
    xp[c] = x[c];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
          dgamma[c][i][j][m] =
              (gp[i][j][m] - gm[i][j][m]) / (2.0L * step);
  }
  Matrix ric = zeros(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Scalar sum = 0.0L;
      for (int a = 0; a < n; ++a) {
        sum += dgamma[a][a][i][j] - dgamma[i][a][a][j];
        for (int b = 0; b < n; ++b) {
          sum += gamma[a][a][b] * gamma[b][i][j] -
                 gamma[a][i][b] * gamma[b][a][j];
        }
      }
      ric[i][j] = sum;
    }
  }
  return ric;
}

void check_oracle_preconditions(int k, double r,
                                std::span<const double> angles, double step) {
  if (k < 2 || k > 15) {
    throw InvalidInputError("ricci_fd_oracle: k must be in [2, 15]");
  }
  if (static_cast<int>(angles.size()) != k - 1) {
    throw InvalidInputError("ricci_fd_oracle: need k-1 sphere angles");
  }
  if (!(step > 0.0)) throw InvalidInputError("ricci_fd_oracle: step > 0");
  if (!(r >= 5.0 * step)) {
    throw InvalidInputError("ricci_fd_oracle: requires r >= 5*step");
  }
  // the last angle is azimuthal; the first k-2 are polar
  for (int j = 0; j + 1 < k - 1; ++j) {
    if (angles[j] < 0.4 || angles[j] > std::numbers::pi - 0.4) {
      throw InvalidInputError(
          "ricci_fd_oracle: polar angle too close to a coordinate pole");
    }
  }
}

std::vector<Scalar> oracle_coords(int k, double r,
                                  std::span<const double> angles) {
  std::vector<Scalar> x(k + 1, 0.0L);
  x[0] = r;
  for (int j = 0; j < k - 1; ++j) x[1 + j] = angles[j];
  return x;
}

RicciSample contract(const Matrix& ric, const std::vector<Scalar>& gdiag,
                     int k, double r) {
  const int n = k + 1;
  RicciSample out;
  out.r = r;
  out.k = k;
  out.hh = static_cast<double>(ric[0][0] / gdiag[0]);
  out.uu = static_cast<double>(ric[1][1] / gdiag[1]);
  out.vv = static_cast<double>(ric[n - 1][n - 1] / gdiag[n - 1]);
  return out;
}

}  // namespace

std::vector<double> default_oracle_angles(int k) {
  std::vector<double> angles(std::max(k - 1, 0));
  for (int j = 0; j < k - 1; ++j) {
    angles[j] = std::numbers::pi / 2 - 0.2 + 0.05 * j;
  }
  return angles;
}

RicciSample ricci_fd_oracle(const WarpFamily& family, const WarpTable* table,
                            int k, double r, std::span<const double> angles,
                            double step) {
  check_oracle_preconditions(k, r, angles, step);
  const std::vector<Scalar> x = oracle_coords(k, r, angles);
  const auto gdiag = metric_diag(family, table, k, x);
  const Matrix ric_h = ricci_tensor_fd(family, table, k, x, step);
  const Matrix ric_h2 = ricci_tensor_fd(family, table, k, x, step / 2.0);
  const RicciSample at_h = contract(ric_h, gdiag, k, r);
  const RicciSample at_h2 = contract(ric_h2, gdiag, k, r);
  const double comps[3][2] = {{at_h.hh, at_h2.hh},
                              {at_h.uu, at_h2.uu},
                              {at_h.vv, at_h2.vv}};
  for (const auto& c : comps) {
    const double budget = 1e-4 * std::abs(c[1]) + 1e-7;
    if (std::abs(c[0] - c[1]) > 10.0 * budget) {
      throw NumericalError(
          "ricci_fd_oracle: step/2 check failed (cancellation; step too "
          "small or metric too rough)");
    }
  }
  // the step/2 pass doubles as one Richardson level, cancelling the leading
  // h^2 truncation (the 1/r Christoffel terms dominate it near the axis)
  RicciSample out;
  out.r = r;
  out.k = k;
  out.hh = (4.0 * at_h2.hh - at_h.hh) / 3.0;
  out.uu = (4.0 * at_h2.uu - at_h.uu) / 3.0;
  out.vv = (4.0 * at_h2.vv - at_h.vv) / 3.0;
  return out;
}

std::vector<std::vector<double>> ricci_fd_tensor_normalized(
    const WarpFamily& family, const WarpTable* table, int k, double r,
    std::span<const double> angles, double step) {
  check_oracle_preconditions(k, r, angles, step);
  const std::vector<Scalar> x = oracle_coords(k, r, angles);
  const auto gdiag = metric_diag(family, table, k, x);
  const Matrix ric = ricci_tensor_fd(family, table, k, x, step);
  const int n = k + 1;
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out[i][j] = static_cast<double>(ric[i][j] / std::sqrt(gdiag[i] * gdiag[j]));
    }
  }
  return out;
}

CurvatureReport positivity_scan(const WarpFamily& family,
                                const WarpTable* table, int k,
                                std::span<const double> r_grid, double margin,
                                int parallel) {
  if (r_grid.empty()) {
    throw InvalidInputError("positivity_scan: empty grid");
  }
  if (!(margin > 0.0)) {
    throw InvalidInputError("positivity_scan: margin must be positive");
  }
  std::vector<RicciSample> samples(r_grid.size());
  numerics::parallel_for(r_grid.size(), parallel, [&](std::size_t i) {
    samples[i] = ricci_closed(eval_warp(family, table, r_grid[i]), k);
  });

  CurvatureReport rep;
  rep.family = family.name();
  rep.k = k;
  rep.samples = r_grid.size();
  rep.r_min = r_grid.front();
  rep.r_max = r_grid.back();
  rep.r_step = r_grid.size() > 1 ? r_grid[1] - r_grid[0] : 0.0;
  rep.margin = margin;
  rep.min_hh = rep.min_uu = rep.min_vv =
      std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.hh < rep.min_hh) { rep.min_hh = s.hh; rep.argmin_hh = s.r; }
    if (s.uu < rep.min_uu) { rep.min_uu = s.uu; rep.argmin_uu = s.r; }
    if (s.vv < rep.min_vv) { rep.min_vv = s.vv; rep.argmin_vv = s.r; }
  }
  rep.positive =
      rep.min_hh > margin && rep.min_uu > margin && rep.min_vv > margin;
  return rep;
}

}  // namespace warplab
