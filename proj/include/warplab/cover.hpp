#pragma once

#include <optional>
#include <string>
#include <vector>

#include "warplab/geodesic.hpp"
#include "warplab/warp.hpp"

namespace warplab {

/// Point on the universal-cover strip; the base point is (0, 0) and the deck
/// generator acts by y -> y + 2*pi.
struct StripPoint {
  double r = 0.0;
  double y = 0.0;
};

/// Deck transformation gamma^l applied to a point.
StripPoint deck(const StripPoint& pt, long l);

enum class DistanceMethod { QuadratureBvp, ShootingBvp, AxisPath, GridOracle };

std::string to_string(DistanceMethod m);

struct RealizingGeodesic {
  double J = 0.0;
  long half_oscillations = 0;
  double r_star = 0.0;
};

struct DistanceResult {
  double value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  DistanceMethod method = DistanceMethod::AxisPath;
  std::optional<RealizingGeodesic> geodesic;
  bool degraded = false;       // no branch converged; value is a bound
  int failed_branches = 0;     // root solves recorded as failed, non-fatal
};

/// Orbit distance L(l) = d(p~, gamma^l p~). Minimizes over the lifted axis
/// circle (length 2*pi*l*h(0)) and, for every feasible half-oscillation
/// count n, the oscillating geodesics with n * delta_y(J) = 2*pi*l. Roots in
/// J are located by a bracket scan and bisection per monotone window.
DistanceResult distance_axis(const WarpFamily& family, const WarpTable* table,
                             long l, double tol = 1e-9);

/// d(gamma^l p~, (t, 0)) = d(p~, (t, 2*pi*l)): shooting over the Clairaut
/// parameter with arrival events at r = t, enumerated over full lobes before
/// the final out/in leg. Always bounded by the radial-then-parallel path
/// t + 2*pi*l*h(t) above and by t below.
DistanceResult distance_axis_to_point(const WarpFamily& family,
                                      const WarpTable* table, long l,
                                      StripPoint target, double tol = 1e-9);

/// Independent coarse oracle: Dijkstra over a uniform (r, y) lattice with a
/// 32-neighbor stencil and midpoint-rule edge lengths. Converges to the true
/// distance from above; the stencil keeps the anisotropy overshoot below
/// 1.3 percent. The window is sized from the feasible-path bound and
/// enlarged if the minimizer touches its boundary.
double grid_distance_oracle(const WarpFamily& family, const WarpTable* table,
                            StripPoint a, StripPoint b, double resolution);

}  // namespace warplab
