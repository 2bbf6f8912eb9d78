#pragma once

#include <cmath>
#include <utility>

#include "warplab/errors.hpp"

namespace warplab::numerics {

/// Brent's method on a bracketing interval [a, b] with f(a)*f(b) <= 0.
template <class F>
double brent(F&& f, double a, double b, double fa, double fb,
             double x_tol = 1e-13, double f_tol = 0.0, int max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) {
    throw NumericalError("brent: interval does not bracket a root");
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * x_tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= f_tol) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double rr = fb / fc;
        p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
        q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
  }
  throw NumericalError("brent: iteration budget exhausted");
}

/// Expands [lo, hi] upward by factor until f changes sign or hi exceeds cap.
/// Returns the bracketing pair (a, b) with f(a)*f(b) <= 0.
template <class F>
std::pair<double, double> expand_bracket_up(F&& f, double lo, double hi,
                                            double cap, double factor = 2.0) {
  double flo = f(lo);
  double fhi = f(hi);
  while (flo * fhi > 0.0) {
    if (hi >= cap) {
      throw NumericalError("expand_bracket_up: no sign change below cap");
    }
    lo = hi;
    flo = fhi;
    hi = std::min(hi * factor, cap);
    fhi = f(hi);
  }
  return {lo, hi};
}

}  // namespace warplab::numerics
