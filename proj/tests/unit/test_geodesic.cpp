#include <doctest.h>

#include <cmath>
#include <numbers>

#include "warplab/geodesic.hpp"
#include "warplab/warp.hpp"

using namespace warplab;

namespace {
const double kH0B = 1.4426950408889634;         // 1/ln2
const double kJ60 = 0.72134752044448170;        // h(0)/2 = 1/(2 ln2)
const double kSqrt2 = std::numbers::sqrt2;
}  // namespace

TEST_CASE("clairaut constant of basic states") {
  const WarpFamily fam = WarpFamily::theorem_b();
  CHECK(clairaut(fam, nullptr, {0.0, 0.0, 1.0, 0.0}) == 0.0);
  // axis parallel at unit speed: dy = 1/h(0), J = h(0)
  CHECK(clairaut(fam, nullptr, {0.0, 0.0, 0.0, 1.0 / kH0B}) ==
        doctest::Approx(kH0B).epsilon(1e-14));
  // 60 degrees from the parallel: J = h(0) cos(60)
  const double dy = std::sin(std::numbers::pi / 6.0) / kH0B;
  CHECK(clairaut(fam, nullptr, {0.0, 0.0, std::cos(std::numbers::pi / 6.0),
                                dy}) == doctest::Approx(kJ60).epsilon(1e-14));
}

TEST_CASE("trace: radial ray stays exactly radial") {
  const WarpFamily fam = WarpFamily::theorem_b();
  const GeodesicPath path =
      trace(fam, nullptr, {0.0, 0.0, 1.0, 0.0}, 50.0, 1e-10);
  CHECK(path.classification == GeodesicClass::RadialRay);
  CHECK(path.samples.back().r == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(path.samples.back().y == 0.0);
  CHECK(path.max_j_drift == 0.0);
  CHECK(path.turning_points.empty());
}

TEST_CASE("trace: the axis circle lift stays on r = 0") {
  const WarpFamily fam = WarpFamily::theorem_b();
  const GeodesicPath path =
      trace(fam, nullptr, {0.0, 0.0, 0.0, 1.0 / kH0B}, 50.0, 1e-10);
  CHECK(path.classification == GeodesicClass::AxisClosed);
  for (const auto& s : path.samples) {
    CHECK(std::abs(s.r) < 1e-9);
  }
  CHECK(path.samples.back().y ==
        doctest::Approx(50.0 / kH0B).epsilon(1e-9));
}

TEST_CASE("trace: 60-degree launch turns at sqrt(2)") {
  const WarpFamily fam = WarpFamily::theorem_b();
  const double theta = std::numbers::pi / 6.0;  // from the radial direction
  const GeodesicPath path = trace(
      fam, nullptr,
      {0.0, 0.0, std::cos(theta), std::sin(theta) / kH0B}, 50.0, 1e-10);
  REQUIRE(!path.turning_points.empty());
  double max_r = 0.0;
  for (const auto& s : path.samples) max_r = std::max(max_r, std::abs(s.r));
  for (const auto& tp : path.turning_points) {
    CHECK(std::abs(std::abs(tp.r) - kSqrt2) < 1e-6);
    max_r = std::max(max_r, std::abs(tp.r));
  }
  CHECK(std::abs(max_r - kSqrt2) < 1e-6);
  CHECK(path.max_j_drift < 1e-9);
}

TEST_CASE("trace: unit speed and oscillation bound on samples") {
  const WarpFamily fam = WarpFamily::theorem_b();
  const double theta = 0.9;
  const GeodesicPath path = trace(
      fam, nullptr,
      {0.0, 0.0, std::cos(theta), std::sin(theta) / kH0B}, 200.0, 1e-10);
  const double r_star = turning_radius(fam, nullptr, path.clairaut);
  for (const auto& s : path.samples) {
    const double h = eval_hbar(fam, nullptr, s.r).h;
    CHECK(std::abs(s.dr * s.dr + h * h * s.dy * s.dy - 1.0) < 1e-9);
    CHECK(std::abs(s.r) <= r_star + 1e-6);
  }
}

TEST_CASE("trace: reflection symmetry in r") {
  const WarpFamily fam = WarpFamily::theorem_b();
  const double theta = 0.7;
  const StripState up{0.0, 0.0, std::cos(theta), std::sin(theta) / kH0B};
  const StripState down{0.0, 0.0, -std::cos(theta), std::sin(theta) / kH0B};
  const GeodesicPath a = trace(fam, nullptr, up, 40.0, 1e-10);
  const GeodesicPath b = trace(fam, nullptr, down, 40.0, 1e-10);
  CHECK(a.samples.back().r == doctest::Approx(-b.samples.back().r).epsilon(1e-9));
  CHECK(a.samples.back().y == doctest::Approx(b.samples.back().y).epsilon(1e-9));
  REQUIRE(a.turning_points.size() == b.turning_points.size());
  CHECK(a.turning_points.front().r ==
        doctest::Approx(-b.turning_points.front().r).epsilon(1e-8));
}

TEST_CASE("trace: flat family runs straight lines") {
  const WarpFamily flat = WarpFamily::flat(2.0);
  const GeodesicPath path =
      trace(flat, nullptr, {1.0, 0.0, 0.6, 0.4}, 10.0, 1e-10);
  const auto& last = path.samples.back();
  CHECK(last.r == doctest::Approx(1.0 + 0.6 * 10.0).epsilon(1e-12));
  CHECK(last.y == doctest::Approx(0.4 * 10.0).epsilon(1e-12));
}

TEST_CASE("classify: the three launch regimes") {
  const WarpFamily fam = WarpFamily::theorem_b();
  CHECK(classify(fam, nullptr, {0.0, 0.0, 1.0, 0.0}).kind ==
        GeodesicClass::RadialRay);
  CHECK(classify(fam, nullptr, {0.0, 0.0, 0.0, 1.0 / kH0B}).kind ==
        GeodesicClass::AxisClosed);
  const double theta = std::numbers::pi / 6.0;
  const ClassifyResult osc = classify(
      fam, nullptr, {0.0, 0.0, std::cos(theta), std::sin(theta) / kH0B});
  CHECK(osc.kind == GeodesicClass::Oscillating);
  REQUIRE(osc.oscillation.has_value());
  CHECK(osc.oscillation->r_star == doctest::Approx(kSqrt2).epsilon(1e-10));

  CHECK_THROWS_AS(classify(fam, nullptr, {1.0, 0.0, 1.0, 0.0}),
                  InvalidInputError);
  CHECK_THROWS_AS(classify(fam, nullptr, {0.0, 0.0, 2.0, 0.0}),
                  InvalidInputError);
}

TEST_CASE("half_oscillation: frozen quadratures at J = h(0)/2") {
  const WarpFamily fam = WarpFamily::theorem_b();
  const OscillationData osc = half_oscillation(fam, nullptr, kJ60, 1e-11);
  CHECK(osc.r_star == doctest::Approx(kSqrt2).epsilon(1e-11));
  CHECK(osc.delta_y == doctest::Approx(4.4976531877983).epsilon(1e-9));
  CHECK(osc.delta_s == doctest::Approx(5.1652067276015).epsilon(1e-9));
  CHECK(osc.delta_s >= 2.0 * osc.r_star);
}

TEST_CASE("half_oscillation: limits and failure modes") {
  const WarpFamily fam = WarpFamily::theorem_b();
  // delta_s >= 2 r* across the J range
  for (double frac : {0.1, 0.4, 0.7, 0.95}) {
    const OscillationData osc =
        half_oscillation(fam, nullptr, frac * kH0B, 1e-10);
    CHECK(osc.delta_s >= 2.0 * osc.r_star);
  }
  // r*(J) -> 0 as J -> h(0)
  CHECK(half_oscillation(fam, nullptr, 0.999 * kH0B, 1e-10).r_star < 0.1);

  CHECK_THROWS_AS(half_oscillation(fam, nullptr, 0.0), InvalidInputError);
  CHECK_THROWS_AS(half_oscillation(fam, nullptr, 2.0 * kH0B),
                  InvalidInputError);
  // flat fiber never decays below a positive J
  CHECK_THROWS_AS(turning_radius(WarpFamily::flat(1.0), nullptr, 0.5),
                  NumericalError);
}

TEST_CASE("quadrature/flow consistency over axis crossings") {
  // n half-oscillations of a traced path advance y by n*delta_y and
  // arclength by n*delta_s, each to 1e-5
  const WarpFamily fam = WarpFamily::theorem_b();
  const double theta = std::numbers::pi / 6.0;
  const OscillationData osc = half_oscillation(fam, nullptr, kJ60, 1e-11);
  const GeodesicPath path = trace(
      fam, nullptr,
      {0.0, 0.0, std::cos(theta), std::sin(theta) / kH0B},
      3.5 * osc.delta_s, 1e-10);
  REQUIRE(path.axis_crossings.size() >= 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto& crossing = path.axis_crossings[n - 1];
    CHECK(crossing.s == doctest::Approx(n * osc.delta_s).epsilon(1e-5));
    CHECK(crossing.y == doctest::Approx(n * osc.delta_y).epsilon(1e-5));
  }
}

TEST_CASE("theorem A strip: oscillation data against a traced orbit") {
  const WarpTable table = build_theorem_a(30.0, 1e-10);
  const WarpFamily fam = WarpFamily::theorem_a();
  const double h0 = eval_hbar(fam, &table, 0.0).h;
  const double J = 0.55 * h0;
  const OscillationData osc = half_oscillation(fam, &table, J, 1e-10);
  const double theta = std::asin(J / h0);  // J = h0 sin(theta)
  const GeodesicPath path =
      trace(fam, &table,
            {0.0, 0.0, std::cos(theta), std::sin(theta) / h0},
            2.2 * osc.delta_s, 1e-10);
  REQUIRE(path.axis_crossings.size() >= 2);
  CHECK(path.axis_crossings[1].s ==
        doctest::Approx(2.0 * osc.delta_s).epsilon(1e-5));
  CHECK(path.axis_crossings[1].y ==
        doctest::Approx(2.0 * osc.delta_y).epsilon(1e-5));
  REQUIRE(!path.turning_points.empty());
  CHECK(std::abs(path.turning_points.front().r) ==
        doctest::Approx(osc.r_star).epsilon(1e-8));
}

TEST_CASE("trace input validation") {
  const WarpFamily fam = WarpFamily::theorem_b();
  CHECK_THROWS_AS(trace(fam, nullptr, {0.0, 0.0, 1.0, 0.0}, -1.0, 1e-10),
                  InvalidInputError);
  CHECK_THROWS_AS(trace(fam, nullptr, {0.0, 0.0, 0.5, 0.0}, 1.0, 1e-10),
                  InvalidInputError);
}
