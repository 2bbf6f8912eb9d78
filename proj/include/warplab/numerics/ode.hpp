#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "warplab/errors.hpp"

namespace warplab::numerics {

// Dormand-Prince 5(4) coefficients.
namespace dopri5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded 4th-order error weights (b - b_hat)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dopri5

template <int N>
using StateVec = std::array<double, N>;

/// One Dormand-Prince 5(4) step from (t, y) with stride h.
/// k1 must hold f(t, y) on entry; on exit y_out, k_out hold the 5th-order
/// result and its derivative (FSAL), err_out the embedded error estimate.
template <int N, class RHS>
void dopri5_step(RHS&& f, double t, const StateVec<N>& y,
                 const StateVec<N>& k1, double h, StateVec<N>& y_out,
                 StateVec<N>& k_out, StateVec<N>& err_out) {
  using namespace dopri5;
  StateVec<N> tmp, k2, k3, k4, k5, k6;
  for (int i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  f(t + c2 * h, tmp, k2);
  for (int i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  f(t + c3 * h, tmp, k3);
  for (int i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  f(t + c4 * h, tmp, k4);
  for (int i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  f(t + c5 * h, tmp, k5);
  for (int i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                         a64 * k4[i] + a65 * k5[i]);
  f(t + h, tmp, k6);
  for (int i = 0; i < N; ++i)
    y_out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                           b6 * k6[i]);
  f(t + h, y_out, k_out);
  for (int i = 0; i < N; ++i)
    err_out[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k_out[i]);
}

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 1e-4;
  double h_max = 1.0;
  double h_min_factor = 1e-14;  // underflow guard relative to span
  long max_steps = 50'000'000;
};

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0), invoking on_step after
/// every accepted step with (t_prev, t_new, y_prev, y_new, k_prev).
/// on_step may return false to stop early.
template <int N, class RHS, class StepCb>
void integrate(RHS&& f, double t0, StateVec<N> y, double t1,
               const OdeOptions& opt, StepCb&& on_step) {
  if (!(t1 > t0)) throw InvalidInputError("integrate: need t1 > t0");
  double t = t0;
  double h = std::min(opt.h_init, t1 - t0);
  const double h_min = (t1 - t0) * opt.h_min_factor;
  StateVec<N> k1, y_new, k_new, err;
  f(t, y, k1);
  long steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) {
      throw NumericalError("integrate: step budget exhausted");
    }
    if (h < h_min) {
      throw NumericalError("integrate: step size underflow at t=" +
                           std::to_string(t));
    }
    const bool last = (t + h >= t1);
    if (last) h = t1 - t;
    dopri5_step<N>(f, t, y, k1, h, y_new, k_new, err);
    double err_norm = 0.0;
    for (int i = 0; i < N; ++i) {
      const double scale =
          opt.abs_tol +
          opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double e = err[i] / scale;
      err_norm += e * e;
    }
    err_norm = std::sqrt(err_norm / N);
    if (err_norm <= 1.0) {
      const double t_prev = t;
      t += h;
      if (!on_step(t_prev, t, y, y_new, k1)) return;
      y = y_new;
      k1 = k_new;
      double fac = (err_norm > 0.0) ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
      fac = std::clamp(fac, 0.2, 5.0);
      h = std::min(h * fac, opt.h_max);
      if (!last) h = std::min(h, t1 - t);
    } else {
      double fac = std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      h *= fac;
    }
  }
}

// ---------------------------------------------------------------------------
// Gragg-Bulirsch-Stoer extrapolation integrator. The modified midpoint rule
// has an even error expansion, so Richardson extrapolation over the substep
// counts 2, 4, ..., 2J yields order 2J with no tabulated coefficients. Used
// where conservation over long spans matters more than dense node output.
// ---------------------------------------------------------------------------

/// One modified-midpoint traversal of [t, t+H] with n substeps (n even),
/// with Gragg's terminal smoothing. k0 must hold f(t, y).
template <int N, class RHS>
StateVec<N> modified_midpoint(RHS&& f, double t, const StateVec<N>& y,
                              const StateVec<N>& k0, double H, int n) {
  const double h = H / n;
  StateVec<N> z_prev = y, z_cur, k;
  for (int i = 0; i < N; ++i) z_cur[i] = y[i] + h * k0[i];
  for (int m = 1; m < n; ++m) {
    f(t + m * h, z_cur, k);
    for (int i = 0; i < N; ++i) {
      const double z_next = z_prev[i] + 2.0 * h * k[i];
      z_prev[i] = z_cur[i];
      z_cur[i] = z_next;
    }
  }
  f(t + H, z_cur, k);
  StateVec<N> out;
  for (int i = 0; i < N; ++i) {
    out[i] = 0.5 * (z_cur[i] + z_prev[i] + h * k[i]);
  }
  return out;
}

inline constexpr int kGbsColumns = 6;  // top column order 2*6 = 12

/// One extrapolated macro step; returns the scaled error norm of the last
/// extrapolation correction. y_out receives the highest-order entry
/// T[J-1][J-1] of the Neville tableau
///   T[j][k] = T[j][k-1] + (T[j][k-1] - T[j-1][k-1]) / ((n_j/n_{j-k})^2 - 1).
template <int N, class RHS>
double gbs_step(RHS&& f, double t, const StateVec<N>& y,
                const StateVec<N>& k0, double H, double rel_tol,
                double abs_tol, StateVec<N>& y_out) {
  constexpr int J = kGbsColumns;
  StateVec<N> tab[J][J];
  for (int j = 0; j < J; ++j) {
    const int nj = 2 * (j + 1);
    tab[j][0] = modified_midpoint<N>(f, t, y, k0, H, nj);
    for (int k = 1; k <= j; ++k) {
      const double ratio =
          static_cast<double>(nj) / static_cast<double>(2 * (j - k + 1));
      const double denom = ratio * ratio - 1.0;
      for (int i = 0; i < N; ++i) {
        tab[j][k][i] = tab[j][k - 1][i] +
                       (tab[j][k - 1][i] - tab[j - 1][k - 1][i]) / denom;
      }
    }
  }
  y_out = tab[J - 1][J - 1];
  double err_norm = 0.0;
  for (int i = 0; i < N; ++i) {
    const double scale =
        abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_out[i]));
    const double e = (tab[J - 1][J - 1][i] - tab[J - 1][J - 2][i]) / scale;
    err_norm += e * e;
  }
  return std::sqrt(err_norm / N);
}

/// Adaptive GBS integration mirroring `integrate`'s callback contract.
template <int N, class RHS, class StepCb>
void integrate_gbs(RHS&& f, double t0, StateVec<N> y, double t1,
                   const OdeOptions& opt, StepCb&& on_step) {
  if (!(t1 > t0)) throw InvalidInputError("integrate_gbs: need t1 > t0");
  double t = t0;
  double h = std::min(opt.h_max, t1 - t0);
  const double h_min = (t1 - t0) * opt.h_min_factor;
  StateVec<N> k0, y_new;
  f(t, y, k0);
  long steps = 0;
  const double order_exp = -1.0 / (2.0 * kGbsColumns - 1.0);
  while (t < t1) {
    if (++steps > opt.max_steps) {
      throw NumericalError("integrate_gbs: step budget exhausted");
    }
    if (h < h_min) {
      throw NumericalError("integrate_gbs: step size underflow at t=" +
                           std::to_string(t));
    }
    const bool last = (t + h >= t1);
    if (last) h = t1 - t;
    const double err_norm =
        gbs_step<N>(f, t, y, k0, h, opt.rel_tol, opt.abs_tol, y_new);
    if (err_norm <= 1.0) {
      const double t_prev = t;
      t += h;
      if (!on_step(t_prev, t, y, y_new, k0)) return;
      y = y_new;
      f(t, y, k0);
      double fac = (err_norm > 0.0) ? 0.9 * std::pow(err_norm, order_exp) : 4.0;
      fac = std::clamp(fac, 0.2, 4.0);
      h = std::min(h * fac, opt.h_max);
      if (!last) h = std::min(h, t1 - t);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err_norm, order_exp));
    }
  }
}

}  // namespace warplab::numerics
