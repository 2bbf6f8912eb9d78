#pragma once

#include <optional>
#include <vector>

#include "warplab/warp.hpp"

namespace warplab {

/// Unit-speed state on the universal-cover strip R x_hbar R with metric
/// dr^2 + hbar(r)^2 dy^2. r is signed; y is the unwound circle coordinate.
struct StripState {
  double r = 0.0, y = 0.0;
  double dr = 1.0, dy = 0.0;
};

struct TurningPoint {
  double s = 0.0;      // arclength
  double r = 0.0, y = 0.0;
  double h_gap = 0.0;  // hbar(r) - |J|, should vanish at a turning point
};

struct AxisCrossing {
  double s = 0.0;
  double y = 0.0;
};

enum class GeodesicClass { RadialRay, AxisClosed, Oscillating, Generic };

struct PathSample {
  double s, r, y, dr, dy, j_drift;
};

struct GeodesicPath {
  StripState start;
  double clairaut = 0.0;  // J = hbar(r)^2 dy, conserved along the flow
  std::vector<PathSample> samples;
  std::vector<TurningPoint> turning_points;
  std::vector<AxisCrossing> axis_crossings;
  GeodesicClass classification = GeodesicClass::Generic;
  double max_j_drift = 0.0;
  double max_speed_defect = 0.0;  // defect of the supplied start state
  int renormalizations = 0;       // start-state normalizations applied
};

/// Clairaut constant J = hbar(r)^2 dy of a strip state.
double clairaut(const WarpFamily& family, const WarpTable* table,
                const StripState& state);

/// Integrates the unit-speed geodesic flow to the requested arclength.
/// Internally the velocity is carried as a heading angle, which keeps the
/// speed exactly 1; the supplied start is renormalized if it drifted.
/// Turning points (dr = 0) and axis crossings (r = 0) are located by sign
/// change and refined by bisection to ~1e-10 in arclength.
GeodesicPath trace(const WarpFamily& family, const WarpTable* table,
                   const StripState& start, double length, double tol = 1e-10);

struct OscillationData {
  double J = 0.0;
  double r_star = 0.0;   // turning radius, hbar(r_star) = |J|
  double delta_y = 0.0;  // fiber advance per half-oscillation
  double delta_s = 0.0;  // arclength per half-oscillation
};

struct ClassifyResult {
  GeodesicClass kind = GeodesicClass::Generic;
  double J = 0.0;
  std::optional<OscillationData> oscillation;
};

/// Classifies a unit-speed geodesic launched from the axis (r = 0):
/// J = 0 -> RadialRay, |J| = h(0) -> AxisClosed, otherwise Oscillating with
/// the turning radius and half-oscillation quadratures attached.
ClassifyResult classify(const WarpFamily& family, const WarpTable* table,
                        const StripState& start);

/// Solves hbar(r*) = |J| for the turning radius (0 < |J| < h(0)).
double turning_radius(const WarpFamily& family, const WarpTable* table,
                      double J);

/// Quadratures over one leg [r_lo, r_hi] of an oscillation arc,
///   dy = int (J/hbar^2)/sqrt(1 - J^2/hbar^2) dr,
///   ds = int 1/sqrt(1 - J^2/hbar^2) dr,
/// with the inverse-square-root endpoint at r* removed by r = r* sin(xi).
struct LegIntegrals {
  double dy = 0.0, ds = 0.0;
};
LegIntegrals oscillation_leg(const WarpFamily& family, const WarpTable* table,
                             double J, double r_lo, double r_hi, double tol,
                             double r_star_hint = 0.0);

/// Full half-oscillation (axis to axis) data for 0 < |J| < h(0).
OscillationData half_oscillation(const WarpFamily& family,
                                 const WarpTable* table, double J,
                                 double tol = 1e-10);

}  // namespace warplab
