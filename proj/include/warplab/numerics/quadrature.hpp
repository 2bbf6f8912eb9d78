#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "warplab/errors.hpp"

namespace warplab::numerics {

// Gauss-Kronrod 7-15 nodes and weights (positive half, QUADPACK dqk15).
inline constexpr double kGk15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kGk15Weights[8] = {
    0.2293532201052922e-1, 0.6309209262997855e-1, 0.1047900103222502,
    0.1406532597155259,    0.1690047266392679,    0.1903505780647854,
    0.2044329400752989,    0.2094821410847278};
inline constexpr double kGauss7Weights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct PanelResult {
  double value;
  double error;
};

template <class F>
PanelResult gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(c);
  double gauss = kGauss7Weights[3] * fc;
  double kronrod = kGk15Weights[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGk15Nodes[i];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kGk15Weights[i] * pair;
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::abs(kronrod - gauss)};
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// Splits the interval with the largest error estimate until
/// sum(err) <= max(abs_tol, rel_tol * |integral|).
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_tol = 0.0,
                                    int max_panels = 20000) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw InvalidInputError("integrate_adaptive: non-finite interval");
  }
  if (a == b) return {0.0, 0.0, 0};

  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  std::priority_queue<Panel> heap;
  auto first = gk15_panel(f, a, b);
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double total_err = first.error;
  int panels = 1;

  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (panels >= max_panels) {
      throw NumericalError("integrate_adaptive: panel budget exhausted (err=" +
                           std::to_string(total_err) + ")");
    }
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) {
      // interval at rounding resolution; accept its estimate as-is
      heap.push({p.a, p.b, p.value, 0.0});
      total_err -= p.error;
      continue;
    }
    auto left = gk15_panel(f, p.a, mid);
    auto right = gk15_panel(f, mid, p.b);
    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    heap.push({p.a, mid, left.value, left.error});
    heap.push({mid, p.b, right.value, right.error});
    ++panels;
  }
  return {total, total_err, panels};
}

}  // namespace warplab::numerics
