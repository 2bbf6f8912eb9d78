#pragma once

#include <span>
#include <string>
#include <vector>

#include "warplab/cover.hpp"

namespace warplab {

/// One Busemann approximant b^(T) = T - d(gamma^l p~, c(T)) along the radial
/// ray c(t) = (t, 0), with its rigorous enclosure and the covering bounds
/// [-2*pi*l*h(T), 0].
struct BusemannRow {
  double T = 0.0;
  double b_value = 0.0;
  double b_lo = 0.0, b_hi = 0.0;  // from the distance enclosure
  double bound_lo = 0.0;          // -2*pi*l*h(T); bound_hi is always 0
  bool bound_only = false;        // distance solver degraded to bounds
};

struct BusemannSeries {
  long l = 0;
  std::vector<BusemannRow> rows;
  bool monotone = true;  // b^ non-decreasing in T, asserted post hoc
};

BusemannSeries busemann_estimate(const WarpFamily& family,
                                 const WarpTable* table, long l,
                                 std::span<const double> T_list,
                                 double tol = 1e-9, int parallel = 1);

struct CertificateRow {
  long l = 0;
  DistanceResult orbit_distance;  // L(l)
  double b_lo = 0.0, b_hi = 0.0;
  double bound_lo = 0.0;
};

/// Evidence (at scale T_max) that the Busemann level set through the orbit
/// fails properness: orbit distances grow while every Busemann interval
/// stays within [-eps, 0].
struct NonProperCertificate {
  std::string family;
  double T_max = 0.0;
  double epsilon = 0.0;
  std::vector<CertificateRow> rows;
  bool L_strictly_increasing = false;
  bool intervals_within_eps = false;
  std::string verdict;  // "non-proper evidence" or "inconclusive"
};

NonProperCertificate nonproper_certificate(const WarpFamily& family,
                                           const WarpTable* table,
                                           std::span<const long> l_set,
                                           double T_max, double eps,
                                           double tol = 1e-9,
                                           int parallel = 1);

/// One cone-probe row: orbit distance L(l), turning radius R(l) of the
/// realizing geodesic, their ratio, and the additivity ratio
/// A(l) = L(2l)/(2 L(l)) whose approach to 1 shadows the splitting.
struct ConeRow {
  long l = 0;
  double L = 0.0;
  double R = 0.0;
  double R_over_L = 0.0;
  double A = 0.0;
};

struct ConeProbeResult {
  std::string family;
  std::vector<ConeRow> rows;
  bool additivity_trend = false;  // {1 - A(l)} non-increasing
  bool ratio_trend = false;       // {R/L} non-increasing
  double trend_tol = 1e-3;
};

/// l_list must be dyadic (each entry doubling the previous); L(2*max) is
/// computed internally for the last additivity ratio.
ConeProbeResult cone_probe(const WarpFamily& family, const WarpTable* table,
                           std::span<const long> l_list, double tol = 1e-9,
                           int parallel = 1);

}  // namespace warplab
