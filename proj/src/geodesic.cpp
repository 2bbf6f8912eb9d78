#include "warplab/geodesic.hpp"

#include <cmath>

#include "warplab/errors.hpp"
#include "warplab/numerics/ode.hpp"
#include "warplab/numerics/quadrature.hpp"
#include "warplab/numerics/rootfind.hpp"

namespace warplab {

namespace {

struct StripMetric {
  const WarpFamily& family;
  const WarpTable* table;
  HbarSample operator()(double r) const { return eval_hbar(family, table, r); }
};

// Heading-angle form of the geodesic flow: with dr = cos(psi),
// dy = sin(psi)/hbar the unit-speed constraint holds identically and
//   r' = cos psi,  y' = sin psi / hbar,  psi' = -hbar' sin psi / hbar
// reproduces r'' = hbar hbar' y'^2 and y'' = -2 (hbar'/hbar) r' y'.
struct FlowRhs {
  const StripMetric& metric;
  void operator()(double /*s*/, const numerics::StateVec<3>& x,
                  numerics::StateVec<3>& dx) const {
    const HbarSample hb = metric(x[0]);
    const double sp = std::sin(x[2]);
    dx[0] = std::cos(x[2]);
    dx[1] = sp / hb.h;
    dx[2] = -hb.hp * sp / hb.h;
  }
};

double speed_defect(const StripMetric& metric, const StripState& s) {
  const double h = metric(s.r).h;
  return std::abs(s.dr * s.dr + h * h * s.dy * s.dy - 1.0);
}

// Bisection refinement of an event inside one accepted step, re-integrating
// partial strides from the step's start state with single extrapolation
// steps (error well below the event localization tolerance).
template <class Event>
double refine_event(const FlowRhs& rhs, double s0,
                    const numerics::StateVec<3>& y0, double h_step,
                    Event&& event_sign, numerics::StateVec<3>& y_at,
                    double s_tol = 1e-10) {
  numerics::StateVec<3> k1, yt;
  rhs(s0, y0, k1);
  double lo = 0.0, hi = h_step;
  const double f_lo = event_sign(y0);
  numerics::gbs_step<3>(rhs, s0, y0, k1, h_step, 1e-12, 1e-14, y_at);
  while (hi - lo > s_tol) {
    const double mid = 0.5 * (lo + hi);
    numerics::gbs_step<3>(rhs, s0, y0, k1, mid, 1e-12, 1e-14, yt);
    if (event_sign(yt) * f_lo > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      y_at = yt;
    }
  }
  return s0 + 0.5 * (lo + hi);
}

}  // namespace

double clairaut(const WarpFamily& family, const WarpTable* table,
                const StripState& state) {
  if (!std::isfinite(state.r) || !std::isfinite(state.dy)) {
    throw InvalidInputError("clairaut: non-finite state");
  }
  const double h = eval_hbar(family, table, state.r).h;
  return h * h * state.dy;
}

GeodesicPath trace(const WarpFamily& family, const WarpTable* table,
                   const StripState& start, double length, double tol) {
  if (!(length > 0.0)) throw InvalidInputError("trace: length > 0 required");
  if (!(tol > 0.0)) throw InvalidInputError("trace: tol > 0 required");
  const StripMetric metric{family, table};

  GeodesicPath path;
  path.start = start;
  path.max_speed_defect = speed_defect(metric, start);
  if (path.max_speed_defect > 1e-6) {
    throw InvalidInputError("trace: start state is not unit speed");
  }

  // heading angle: cos(psi) = dr, sin(psi) = hbar * dy
  const double h_start = metric(start.r).h;
  double psi = std::atan2(h_start * start.dy, start.dr);
  if (path.max_speed_defect > 0.0) path.renormalizations = 1;

  const double J0 = h_start * std::sin(psi);
  path.clairaut = J0;

  const FlowRhs rhs{metric};
  numerics::OdeOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol * 1e-2;
  opt.h_init = std::min(1e-4, length);
  opt.h_max = 0.5;

  auto emit = [&](double s, const numerics::StateVec<3>& x) {
    const HbarSample hb = metric(x[0]);
    const double dr = std::cos(x[2]);
    const double dy = std::sin(x[2]) / hb.h;
    const double J = hb.h * std::sin(x[2]);
    const double drift = J - J0;
    path.max_j_drift = std::max(path.max_j_drift, std::abs(drift));
    path.samples.push_back({s, x[0], x[1], dr, dy, drift});
  };

  numerics::StateVec<3> x0{start.r, start.y, psi};
  emit(0.0, x0);

  numerics::integrate_gbs<3>(
      rhs, 0.0, x0, length, opt,
      [&](double s0, double s1, const numerics::StateVec<3>& y0,
          const numerics::StateVec<3>& y1, const numerics::StateVec<3>&) {
        // turning points: sign change of cos(psi)
        const double c0 = std::cos(y0[2]);
        const double c1 = std::cos(y1[2]);
        if (c0 * c1 < 0.0) {
          numerics::StateVec<3> y_at;
          const double s_ev = refine_event(
              rhs, s0, y0, s1 - s0,
              [](const numerics::StateVec<3>& y) { return std::cos(y[2]); },
              y_at);
          const double h_at = metric(y_at[0]).h;
          path.turning_points.push_back(
              {s_ev, y_at[0], y_at[1], h_at - std::abs(J0)});
        }
        // axis crossings: sign change of r
        if (y0[0] * y1[0] < 0.0) {
          numerics::StateVec<3> y_at;
          const double s_ev = refine_event(
              rhs, s0, y0, s1 - s0,
              [](const numerics::StateVec<3>& y) { return y[0]; }, y_at);
          path.axis_crossings.push_back({s_ev, y_at[1]});
        }
        emit(s1, y1);
        return true;
      });

  if (path.max_j_drift > 1e3 * tol * (1.0 + std::abs(J0))) {
    throw NumericalError("trace: Clairaut drift exceeded 1e3 x tolerance");
  }

  // classification for axis launches
  if (std::abs(start.r) < 1e-12) {
    const double h0 = metric(0.0).h;
    if (std::abs(J0) < 1e-12) {
      path.classification = GeodesicClass::RadialRay;
    } else if (std::abs(std::abs(J0) - h0) < 1e-12 * (1.0 + h0)) {
      path.classification = GeodesicClass::AxisClosed;
    } else {
      path.classification = GeodesicClass::Oscillating;
    }
  }
  return path;
}

double turning_radius(const WarpFamily& family, const WarpTable* table,
                      double J) {
  const double aJ = std::abs(J);
  const double h0 = eval_hbar(family, table, 0.0).h;
  if (!(aJ > 0.0) || !(aJ < h0)) {
    throw InvalidInputError("turning_radius: need 0 < |J| < h(0)");
  }
  const double cap =
      (family.kind() == WarpKind::TheoremA)
          ? table->r_max()
          : (family.kind() == WarpKind::Custom ? family.custom_table()->r_max()
                                               : 1e18);
  auto gap = [&](double r) { return eval_hbar(family, table, r).h - aJ; };
  double lo = 0.0, hi = 1.0;
  try {
    auto [a, b] = numerics::expand_bracket_up(gap, lo, std::min(hi, cap), cap);
    return numerics::brent(gap, a, b, gap(a), gap(b), 1e-14);
  } catch (const NumericalError&) {
    throw NumericalError(
        "turning_radius: h does not decay below |J| within range (r_max=" +
        std::to_string(cap) + ")");
  }
}

LegIntegrals oscillation_leg(const WarpFamily& family, const WarpTable* table,
                             double J, double r_lo, double r_hi, double tol,
                             double r_star_hint) {
  const double aJ = std::abs(J);
  if (!(r_lo >= 0.0) || r_lo > r_hi * (1.0 + 1e-12)) {
    throw InvalidInputError("oscillation_leg: need 0 <= r_lo <= r_hi");
  }
  if (r_lo >= r_hi) return {0.0, 0.0};

  if (r_star_hint == 0.0) {
    // if the leg ends far from the turning point the integrand is smooth in
    // r and no substitution (hence no in-range turning radius) is needed
    const double h_hi = eval_hbar(family, table, r_hi).h;
    if (aJ < h_hi) {
      const double a_hi = aJ / h_hi;
      const double g_hi = (1.0 - a_hi) * (1.0 + a_hi);
      if (g_hi >= 0.2) {
        auto w_s = [&](double r) {
          const double a = aJ / eval_hbar(family, table, r).h;
          return 1.0 / std::sqrt((1.0 - a) * (1.0 + a));
        };
        auto w_y = [&](double r) {
          const double h = eval_hbar(family, table, r).h;
          const double a = aJ / h;
          return (J / (h * h)) / std::sqrt((1.0 - a) * (1.0 + a));
        };
        LegIntegrals out;
        out.ds = numerics::integrate_adaptive(w_s, r_lo, r_hi, tol, tol * 0.01)
                     .value;
        out.dy = numerics::integrate_adaptive(w_y, r_lo, r_hi, tol, tol * 0.01)
                     .value;
        out.ds = std::max(out.ds, r_hi - r_lo);
        return out;
      }
    }
  }

  const double rs =
      r_star_hint > 0.0 ? r_star_hint : turning_radius(family, table, J);
  if (r_hi > rs * (1.0 + 1e-9)) {
    throw InvalidInputError("oscillation_leg: r_hi beyond the turning radius");
  }

  // endpoint expansion coefficients of G(r) = 1 - J^2/hbar^2 at r*:
  // G ~ c1 (r*-r) + c2 (r*-r)^2
  const HbarSample at_rs = eval_hbar(family, table, rs);
  const double c1 = -2.0 * at_rs.hp / aJ;
  const double c2 = at_rs.hpp / aJ - 3.0 * at_rs.hp * at_rs.hp / (aJ * aJ);

  auto G = [&](double r) {
    const double gap = rs - r;
    if (gap < 1e-6 * std::max(rs, 1.0)) {
      return gap * (c1 + c2 * gap);
    }
    const double a = aJ / eval_hbar(family, table, r).h;
    return (1.0 - a) * (1.0 + a);
  };

  const double xi_lo = std::asin(std::min(r_lo / rs, 1.0));
  const double xi_hi = std::asin(std::min(r_hi / rs, 1.0));

  auto w_base = [&](double xi) {
    const double c = std::cos(xi);
    const double r = std::min(rs * std::sin(xi), rs);
    const double g = G(r);
    if (g <= 0.0) return 0.0;  // only at the exact endpoint
    return rs * c / std::sqrt(g);
  };
  auto w_y = [&](double xi) {
    const double r = std::min(rs * std::sin(xi), rs);
    const double h = eval_hbar(family, table, r).h;
    return w_base(xi) * (J / (h * h));
  };

  LegIntegrals out;
  out.ds = numerics::integrate_adaptive(w_base, xi_lo, xi_hi, tol, tol * 0.01)
               .value;
  out.dy =
      numerics::integrate_adaptive(w_y, xi_lo, xi_hi, tol, tol * 0.01).value;
  // the ds integrand dominates rs*cos(xi) pointwise
  out.ds = std::max(out.ds, r_hi - r_lo);
  return out;
}

OscillationData half_oscillation(const WarpFamily& family,
                                 const WarpTable* table, double J,
                                 double tol) {
  const double h0 = eval_hbar(family, table, 0.0).h;
  const double aJ = std::abs(J);
  if (!(aJ > 0.0) || !(aJ < h0)) {
    throw InvalidInputError("half_oscillation: need 0 < |J| < h(0)");
  }
  OscillationData out;
  out.J = J;
  out.r_star = turning_radius(family, table, J);
  const LegIntegrals leg =
      oscillation_leg(family, table, J, 0.0, out.r_star, tol, out.r_star);
  out.delta_y = 2.0 * leg.dy;
  out.delta_s = 2.0 * leg.ds;
  return out;
}

ClassifyResult classify(const WarpFamily& family, const WarpTable* table,
                        const StripState& start) {
  if (std::abs(start.r) > 1e-12) {
    throw InvalidInputError("classify: start must lie on the axis r = 0");
  }
  const StripMetric metric{family, table};
  if (speed_defect(metric, start) > 1e-6) {
    throw InvalidInputError("classify: start state is not unit speed");
  }
  ClassifyResult out;
  out.J = clairaut(family, table, start);
  const double h0 = metric(0.0).h;
  if (std::abs(out.J) < 1e-12) {
    out.kind = GeodesicClass::RadialRay;
  } else if (std::abs(std::abs(out.J) - h0) < 1e-12 * (1.0 + h0)) {
    out.kind = GeodesicClass::AxisClosed;
  } else {
    out.kind = GeodesicClass::Oscillating;
    out.oscillation = half_oscillation(family, table, out.J);
  }
  return out;
}

}  // namespace warplab
