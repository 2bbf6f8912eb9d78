#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "warplab/errors.hpp"

namespace warplab {

/// Warp pair (f, h) and derivatives at one radius.
/// All families satisfy f(0)=0, f'(0)=1, f''(0)=0, h(0)>0, h'(0)=0, and for
/// r > 0 the non-flat families keep f' in (0,1), f'' < 0, h' < 0.
struct WarpSample {
  double r = 0.0;
  double f = 0.0, fp = 0.0, fpp = 0.0;   // f, f', f''
  double h = 0.0, hp = 0.0, hpp = 0.0;   // h, h', h''
  std::optional<double> fppp;            // third derivative when available
  std::optional<double> hppp;
};

/// Even extension hbar(r) = h(|r|) with odd hbar' and even hbar''.
struct HbarSample {
  double h = 0.0, hp = 0.0, hpp = 0.0;
};

enum class WarpKind { TheoremA, TheoremB, Flat, Custom };

/// phi(x) = (sqrt(3)/pi) * integral_0^x arctan(u^3)/u^2 du.
/// The integrand is extended continuously by 0 at u = 0.
double phi(double x, double tol = 1e-12);

/// arctan(u^3)/u^2 with its continuous extension at u = 0.
double atan_cubed_quotient(double u);

/// Dense-output table for the ODE-defined warp pair: nodes carry (r, f, P)
/// with P = phi(f); evaluation between nodes is quintic Hermite with the
/// derivative chain closed analytically from the ODE. Immutable once built;
/// safe for concurrent reads.
class WarpTable {
 public:
  struct Node {
    double r, f, P;
  };

  double r_max() const { return r_max_; }
  double tol() const { return tol_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::string family_tag() const { return family_tag_; }

  WarpSample eval(double r) const;
  double phi_state(double r) const;  // interpolated P(r)

  void save(const std::filesystem::path& path) const;
  static WarpTable load(const std::filesystem::path& path);

 private:
  friend WarpTable build_theorem_a(double r_max, double tol);
  std::vector<Node> nodes_;
  double r_max_ = 0.0;
  double tol_ = 0.0;
  std::string family_tag_ = "theorem-a";
  std::size_t locate(double r) const;
};

/// Solves f' = sqrt(1 - P), P' = (sqrt(3)/pi) * (arctan(f^3)/f^2) * f' from
/// f(0) = P(0) = 0 up to r_max, so P(r) = phi(f(r)) along the solution.
WarpTable build_theorem_a(double r_max, double tol = 1e-10);

/// Closed forms f(r) = sqrt(ln 2) r / ln^{1/2}(2+r^2), h(r) = 1/ln(2+r^2).
WarpSample eval_theorem_b(double r);

/// Selector for the warp pair used by every downstream module.
class WarpFamily {
 public:
  static WarpFamily theorem_a();
  static WarpFamily theorem_b();
  static WarpFamily flat(double fiber_size);
  static WarpFamily custom(std::shared_ptr<const WarpTable> table);

  /// Parses "theorem-a" | "theorem-b" | "flat:<c>".
  static WarpFamily parse(const std::string& spec);

  WarpKind kind() const { return kind_; }
  double flat_fiber() const { return flat_c_; }
  const WarpTable* custom_table() const { return table_.get(); }
  std::string name() const;

  /// True when h(r) -> 0 as r -> infinity (the certificate precondition).
  bool h_decays() const { return kind_ == WarpKind::TheoremA ||
                                 kind_ == WarpKind::TheoremB ||
                                 kind_ == WarpKind::Custom; }

 private:
  WarpKind kind_ = WarpKind::Flat;
  double flat_c_ = 1.0;
  std::shared_ptr<const WarpTable> table_;
};

/// Uniform accessor. `table` is required for TheoremA and ignored otherwise
/// (Custom families carry their own table).
WarpSample eval_warp(const WarpFamily& family, const WarpTable* table,
                     double r);

/// Even extension of h for the universal-cover strip; r may be negative.
HbarSample eval_hbar(const WarpFamily& family, const WarpTable* table,
                     double r);

namespace detail {

/// Extended-precision (f, h) values for the finite-difference curvature
/// oracle, whose double differencing would otherwise sit on the double
/// rounding floor.
struct WarpValueLd {
  long double f = 0.0L;
  long double h = 0.0L;
};

WarpValueLd eval_warp_ld(const WarpFamily& family, const WarpTable* table,
                         long double r);

}  // namespace detail

}  // namespace warplab
