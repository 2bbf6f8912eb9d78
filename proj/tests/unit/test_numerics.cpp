#include <doctest.h>

#include <cmath>
#include <numbers>

#include "warplab/numerics/ode.hpp"
#include "warplab/numerics/quadrature.hpp"
#include "warplab/numerics/rootfind.hpp"

using namespace warplab;

TEST_CASE("adaptive quadrature: polynomials and smooth integrands") {
  auto poly = [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; };
  const auto r = numerics::integrate_adaptive(poly, 0.0, 2.0, 1e-12);
  CHECK(r.value == doctest::Approx(8.0 - 4.0 + 2.0).epsilon(1e-13));

  auto osc = [](double x) { return std::sin(10.0 * x); };
  const auto r2 = numerics::integrate_adaptive(osc, 0.0, 3.0, 1e-12);
  CHECK(r2.value ==
        doctest::Approx((1.0 - std::cos(30.0)) / 10.0).epsilon(1e-11));
}

TEST_CASE("adaptive quadrature: inverse-square-root endpoint") {
  // int_0^1 1/sqrt(1-x) dx = 2; integrable endpoint singularity
  auto f = [](double x) { return 1.0 / std::sqrt(1.0 - x); };
  const auto r = numerics::integrate_adaptive(f, 0.0, 1.0 - 1e-14, 1e-9);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("brent finds simple roots") {
  auto f = [](double x) { return x * x - 2.0; };
  const double root = numerics::brent(f, 0.0, 2.0, f(0.0), f(2.0), 1e-14);
  CHECK(root == doctest::Approx(std::numbers::sqrt2).epsilon(1e-13));
}

TEST_CASE("expand_bracket_up reports missing sign change") {
  auto f = [](double) { return 1.0; };
  CHECK_THROWS_AS(numerics::expand_bracket_up(f, 0.0, 1.0, 64.0),
                  NumericalError);
}

TEST_CASE("ode integrator: exponential growth to 1e-10") {
  auto rhs = [](double, const numerics::StateVec<1>& y,
                numerics::StateVec<1>& dy) { dy[0] = y[0]; };
  numerics::OdeOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-12;
  double y_end = 0.0;
  numerics::integrate<1>(rhs, 0.0, {1.0}, 1.0, opt,
                         [&](double, double, const numerics::StateVec<1>&,
                             const numerics::StateVec<1>& y1,
                             const numerics::StateVec<1>&) {
                           y_end = y1[0];
                           return true;
                         });
  CHECK(y_end == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
}

TEST_CASE("ode integrator: harmonic oscillator energy over long spans") {
  auto rhs = [](double, const numerics::StateVec<2>& y,
                numerics::StateVec<2>& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  numerics::OdeOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-12;
  opt.h_max = 0.5;

  // the embedded pair drives the warp tables (short-range node accuracy)
  double worst_dp5 = 0.0;
  numerics::integrate<2>(rhs, 0.0, {1.0, 0.0}, 200.0, opt,
                         [&](double, double, const numerics::StateVec<2>&,
                             const numerics::StateVec<2>& y1,
                             const numerics::StateVec<2>&) {
                           const double e =
                               std::abs(y1[0] * y1[0] + y1[1] * y1[1] - 1.0);
                           worst_dp5 = std::max(worst_dp5, e);
                           return true;
                         });
  CHECK(worst_dp5 < 1e-7);

  // the extrapolation stepper carries long geodesic traces; conservation
  // must hold well below the 1e-8 drift budget over span 1e3
  double worst_gbs = 0.0;
  numerics::StateVec<2> last{1.0, 0.0};
  numerics::integrate_gbs<2>(rhs, 0.0, {1.0, 0.0}, 1000.0, opt,
                             [&](double, double, const numerics::StateVec<2>&,
                                 const numerics::StateVec<2>& y1,
                                 const numerics::StateVec<2>&) {
                               const double e = std::abs(
                                   y1[0] * y1[0] + y1[1] * y1[1] - 1.0);
                               worst_gbs = std::max(worst_gbs, e);
                               last = y1;
                               return true;
                             });
  CHECK(worst_gbs < 1e-9);
  CHECK(last[0] == doctest::Approx(std::cos(1000.0)).epsilon(1e-8));
}

TEST_CASE("ode integrator: step underflow raises") {
  auto rhs = [](double t, const numerics::StateVec<1>& y,
                numerics::StateVec<1>& dy) {
    dy[0] = y[0] / (1.0 - t);  // blows up at t = 1
  };
  numerics::OdeOptions opt;
  opt.rel_tol = 1e-10;
  CHECK_THROWS_AS(
      numerics::integrate<1>(rhs, 0.0, {1.0}, 2.0, opt,
                             [](double, double, const numerics::StateVec<1>&,
                                const numerics::StateVec<1>&,
                                const numerics::StateVec<1>&) { return true; }),
      NumericalError);
}
