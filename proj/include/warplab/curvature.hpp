#pragma once

#include <span>
#include <string>
#include <vector>

#include "warplab/warp.hpp"

namespace warplab {

/// Ricci curvature in the three distinguished directions at one radius:
/// H = d/dr, U tangent to the sphere factor, V tangent to the circle factor.
struct RicciSample {
  double r = 0.0;
  int k = 0;
  double hh = 0.0, uu = 0.0, vv = 0.0;
};

/// Closed-form Ricci values
///   Ric(H,H) = -h''/h - (k-1) f''/f
///   Ric(U,U) = -f''/f + (k-2)[1-(f')^2]/f^2 - f'h'/(fh)
///   Ric(V,V) = -h''/h - (k-1) f'h'/(fh)
/// with the r = 0 quotients evaluated by their series limits.
RicciSample ricci_closed(const WarpSample& sample, int k);

/// Independent check: builds the metric dr^2 + f^2 ds_{k-1}^2 + h^2 ds_1^2 in
/// hyperspherical coordinates, differences it twice for Christoffel symbols
/// and the Ricci tensor, and contracts against unit H/U/V directions.
/// `angles` are the k-1 sphere angles; polar angles must stay in
/// [0.4, pi-0.4]. A Richardson re-run at step/2 guards against cancellation.
RicciSample ricci_fd_oracle(const WarpFamily& family, const WarpTable* table,
                            int k, double r, std::span<const double> angles,
                            double step = 1e-4);

/// Full finite-difference Ricci tensor in normalized (orthonormal-scaled)
/// coordinates; exposed for symmetry diagnostics.
std::vector<std::vector<double>> ricci_fd_tensor_normalized(
    const WarpFamily& family, const WarpTable* table, int k, double r,
    std::span<const double> angles, double step = 1e-4);

/// Deterministic default angle set for the oracle, away from the poles.
std::vector<double> default_oracle_angles(int k);

struct CurvatureReport {
  std::string family;
  int k = 0;
  double r_min = 0.0, r_max = 0.0, r_step = 0.0;
  std::size_t samples = 0;
  double min_hh = 0.0, min_uu = 0.0, min_vv = 0.0;
  double argmin_hh = 0.0, argmin_uu = 0.0, argmin_vv = 0.0;
  double margin = 0.0;
  bool positive = false;
};

/// Evaluates ricci_closed over the grid and reports minima and the
/// positivity verdict (all three minima strictly above `margin`).
CurvatureReport positivity_scan(const WarpFamily& family,
                                const WarpTable* table, int k,
                                std::span<const double> r_grid,
                                double margin = 1e-12, int parallel = 1);

}  // namespace warplab
