#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

#include "warplab/asymptotics.hpp"
#include "warplab/cover.hpp"
#include "warplab/curvature.hpp"
#include "warplab/errors.hpp"
#include "warplab/geodesic.hpp"
#include "warplab/version.hpp"
#include "warplab/warp.hpp"

namespace py = pybind11;
using namespace warplab;

namespace {

const WarpTable* table_ptr(const py::object& table) {
  if (table.is_none()) return nullptr;
  return table.cast<const WarpTable*>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "warped-product curvature, geodesic and covering-distance lab";
  m.attr("__version__") = kVersion;

  py::register_exception<InvalidInputError>(m, "InvalidInputError",
                                            PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  // ----- warp -----
  py::class_<WarpSample>(m, "WarpSample")
      .def_readonly("r", &WarpSample::r)
      .def_readonly("f", &WarpSample::f)
      .def_readonly("fp", &WarpSample::fp)
      .def_readonly("fpp", &WarpSample::fpp)
      .def_readonly("h", &WarpSample::h)
      .def_readonly("hp", &WarpSample::hp)
      .def_readonly("hpp", &WarpSample::hpp)
      .def_readonly("fppp", &WarpSample::fppp)
      .def_readonly("hppp", &WarpSample::hppp);

  py::class_<HbarSample>(m, "HbarSample")
      .def_readonly("h", &HbarSample::h)
      .def_readonly("hp", &HbarSample::hp)
      .def_readonly("hpp", &HbarSample::hpp);

  py::class_<WarpTable, std::shared_ptr<WarpTable>>(m, "WarpTable")
      .def_property_readonly("r_max", &WarpTable::r_max)
      .def_property_readonly("tol", &WarpTable::tol)
      .def("eval", &WarpTable::eval, py::arg("r"))
      .def("phi_state", &WarpTable::phi_state, py::arg("r"))
      .def("save", &WarpTable::save, py::arg("path"))
      .def_static("load", &WarpTable::load, py::arg("path"));

  py::class_<WarpFamily>(m, "WarpFamily")
      .def_static("theorem_a", &WarpFamily::theorem_a)
      .def_static("theorem_b", &WarpFamily::theorem_b)
      .def_static("flat", &WarpFamily::flat, py::arg("fiber_size"))
      .def_static("parse", &WarpFamily::parse, py::arg("spec"))
      .def_property_readonly("name", &WarpFamily::name)
      .def_property_readonly("h_decays", &WarpFamily::h_decays);

  m.def("phi", &phi, py::arg("x"), py::arg("tol") = 1e-12);
  m.def("build_theorem_a", &build_theorem_a, py::arg("r_max"),
        py::arg("tol") = 1e-10);
  m.def("eval_theorem_b", &eval_theorem_b, py::arg("r"));
  m.def(
      "eval_warp",
      [](const WarpFamily& family, const py::object& table, double r) {
        return eval_warp(family, table_ptr(table), r);
      },
      py::arg("family"), py::arg("table"), py::arg("r"));
  m.def(
      "eval_hbar",
      [](const WarpFamily& family, const py::object& table, double r) {
        return eval_hbar(family, table_ptr(table), r);
      },
      py::arg("family"), py::arg("table"), py::arg("r"));

  // ----- curvature -----
  py::class_<RicciSample>(m, "RicciSample")
      .def_readonly("r", &RicciSample::r)
      .def_readonly("k", &RicciSample::k)
      .def_readonly("hh", &RicciSample::hh)
      .def_readonly("uu", &RicciSample::uu)
      .def_readonly("vv", &RicciSample::vv);

  py::class_<CurvatureReport>(m, "CurvatureReport")
      .def_readonly("family", &CurvatureReport::family)
      .def_readonly("k", &CurvatureReport::k)
      .def_readonly("min_hh", &CurvatureReport::min_hh)
      .def_readonly("min_uu", &CurvatureReport::min_uu)
      .def_readonly("min_vv", &CurvatureReport::min_vv)
      .def_readonly("argmin_hh", &CurvatureReport::argmin_hh)
      .def_readonly("argmin_uu", &CurvatureReport::argmin_uu)
      .def_readonly("argmin_vv", &CurvatureReport::argmin_vv)
      .def_readonly("margin", &CurvatureReport::margin)
      .def_readonly("positive", &CurvatureReport::positive);

  m.def("ricci_closed", &ricci_closed, py::arg("sample"), py::arg("k"));
  m.def("default_oracle_angles", &default_oracle_angles, py::arg("k"));
  m.def(
      "ricci_fd_oracle",
      [](const WarpFamily& family, const py::object& table, int k, double r,
         std::vector<double> angles, double step) {
        if (angles.empty()) angles = default_oracle_angles(k);
        return ricci_fd_oracle(family, table_ptr(table), k, r, angles, step);
      },
      py::arg("family"), py::arg("table"), py::arg("k"), py::arg("r"),
      py::arg("angles") = std::vector<double>{}, py::arg("step") = 1e-4);
  m.def(
      "positivity_scan",
      [](const WarpFamily& family, const py::object& table, int k,
         std::vector<double> grid, double margin, int parallel) {
        return positivity_scan(family, table_ptr(table), k, grid, margin,
                               parallel);
      },
      py::arg("family"), py::arg("table"), py::arg("k"), py::arg("grid"),
      py::arg("margin") = 1e-12, py::arg("parallel") = 1);

  // ----- geodesic -----
  py::class_<StripState>(m, "StripState")
      .def(py::init([](double r, double y, double dr, double dy) {
             return StripState{r, y, dr, dy};
           }),
           py::arg("r") = 0.0, py::arg("y") = 0.0, py::arg("dr") = 1.0,
           py::arg("dy") = 0.0)
      .def_readwrite("r", &StripState::r)
      .def_readwrite("y", &StripState::y)
      .def_readwrite("dr", &StripState::dr)
      .def_readwrite("dy", &StripState::dy);

  py::enum_<GeodesicClass>(m, "GeodesicClass")
      .value("RadialRay", GeodesicClass::RadialRay)
      .value("AxisClosed", GeodesicClass::AxisClosed)
      .value("Oscillating", GeodesicClass::Oscillating)
      .value("Generic", GeodesicClass::Generic);

  py::class_<PathSample>(m, "PathSample")
      .def_readonly("s", &PathSample::s)
      .def_readonly("r", &PathSample::r)
      .def_readonly("y", &PathSample::y)
      .def_readonly("dr", &PathSample::dr)
      .def_readonly("dy", &PathSample::dy)
      .def_readonly("j_drift", &PathSample::j_drift);

  py::class_<TurningPoint>(m, "TurningPoint")
      .def_readonly("s", &TurningPoint::s)
      .def_readonly("r", &TurningPoint::r)
      .def_readonly("y", &TurningPoint::y)
      .def_readonly("h_gap", &TurningPoint::h_gap);

  py::class_<AxisCrossing>(m, "AxisCrossing")
      .def_readonly("s", &AxisCrossing::s)
      .def_readonly("y", &AxisCrossing::y);

  py::class_<GeodesicPath>(m, "GeodesicPath")
      .def_readonly("clairaut", &GeodesicPath::clairaut)
      .def_readonly("samples", &GeodesicPath::samples)
      .def_readonly("turning_points", &GeodesicPath::turning_points)
      .def_readonly("axis_crossings", &GeodesicPath::axis_crossings)
      .def_readonly("classification", &GeodesicPath::classification)
      .def_readonly("max_j_drift", &GeodesicPath::max_j_drift);

  py::class_<OscillationData>(m, "OscillationData")
      .def_readonly("J", &OscillationData::J)
      .def_readonly("r_star", &OscillationData::r_star)
      .def_readonly("delta_y", &OscillationData::delta_y)
      .def_readonly("delta_s", &OscillationData::delta_s);

  py::class_<ClassifyResult>(m, "ClassifyResult")
      .def_readonly("kind", &ClassifyResult::kind)
      .def_readonly("J", &ClassifyResult::J)
      .def_readonly("oscillation", &ClassifyResult::oscillation);

  m.def(
      "clairaut",
      [](const WarpFamily& family, const py::object& table,
         const StripState& s) { return clairaut(family, table_ptr(table), s); },
      py::arg("family"), py::arg("table"), py::arg("state"));
  m.def(
      "trace",
      [](const WarpFamily& family, const py::object& table,
         const StripState& start, double length, double tol) {
        return trace(family, table_ptr(table), start, length, tol);
      },
      py::arg("family"), py::arg("table"), py::arg("start"), py::arg("length"),
      py::arg("tol") = 1e-10);
  m.def(
      "classify",
      [](const WarpFamily& family, const py::object& table,
         const StripState& start) {
        return classify(family, table_ptr(table), start);
      },
      py::arg("family"), py::arg("table"), py::arg("start"));
  m.def(
      "turning_radius",
      [](const WarpFamily& family, const py::object& table, double J) {
        return turning_radius(family, table_ptr(table), J);
      },
      py::arg("family"), py::arg("table"), py::arg("J"));
  m.def(
      "half_oscillation",
      [](const WarpFamily& family, const py::object& table, double J,
         double tol) {
        return half_oscillation(family, table_ptr(table), J, tol);
      },
      py::arg("family"), py::arg("table"), py::arg("J"),
      py::arg("tol") = 1e-10);

  // ----- cover -----
  py::class_<StripPoint>(m, "StripPoint")
      .def(py::init([](double r, double y) {
             return StripPoint{r, y};
           }),
           py::arg("r") = 0.0, py::arg("y") = 0.0)
      .def_readwrite("r", &StripPoint::r)
      .def_readwrite("y", &StripPoint::y);

  py::enum_<DistanceMethod>(m, "DistanceMethod")
      .value("QuadratureBvp", DistanceMethod::QuadratureBvp)
      .value("ShootingBvp", DistanceMethod::ShootingBvp)
      .value("AxisPath", DistanceMethod::AxisPath)
      .value("GridOracle", DistanceMethod::GridOracle);

  py::class_<RealizingGeodesic>(m, "RealizingGeodesic")
      .def_readonly("J", &RealizingGeodesic::J)
      .def_readonly("half_oscillations", &RealizingGeodesic::half_oscillations)
      .def_readonly("r_star", &RealizingGeodesic::r_star);

  py::class_<DistanceResult>(m, "DistanceResult")
      .def_readonly("value", &DistanceResult::value)
      .def_readonly("lower_bound", &DistanceResult::lower_bound)
      .def_readonly("upper_bound", &DistanceResult::upper_bound)
      .def_readonly("method", &DistanceResult::method)
      .def_readonly("geodesic", &DistanceResult::geodesic)
      .def_readonly("degraded", &DistanceResult::degraded)
      .def_property_readonly("method_name", [](const DistanceResult& d) {
        return to_string(d.method);
      });

  m.def("deck", &deck, py::arg("point"), py::arg("l"));
  m.def(
      "distance_axis",
      [](const WarpFamily& family, const py::object& table, long l,
         double tol) { return distance_axis(family, table_ptr(table), l, tol); },
      py::arg("family"), py::arg("table"), py::arg("l"),
      py::arg("tol") = 1e-9);
  m.def(
      "distance_axis_to_point",
      [](const WarpFamily& family, const py::object& table, long l,
         const StripPoint& target, double tol) {
        return distance_axis_to_point(family, table_ptr(table), l, target,
                                      tol);
      },
      py::arg("family"), py::arg("table"), py::arg("l"), py::arg("target"),
      py::arg("tol") = 1e-9);
  m.def(
      "grid_distance_oracle",
      [](const WarpFamily& family, const py::object& table,
         const StripPoint& a, const StripPoint& b, double resolution) {
        return grid_distance_oracle(family, table_ptr(table), a, b,
                                    resolution);
      },
      py::arg("family"), py::arg("table"), py::arg("a"), py::arg("b"),
      py::arg("resolution"));

  // ----- asymptotics -----
  py::class_<BusemannRow>(m, "BusemannRow")
      .def_readonly("T", &BusemannRow::T)
      .def_readonly("b_value", &BusemannRow::b_value)
      .def_readonly("b_lo", &BusemannRow::b_lo)
      .def_readonly("b_hi", &BusemannRow::b_hi)
      .def_readonly("bound_lo", &BusemannRow::bound_lo)
      .def_readonly("bound_only", &BusemannRow::bound_only);

  py::class_<BusemannSeries>(m, "BusemannSeries")
      .def_readonly("l", &BusemannSeries::l)
      .def_readonly("rows", &BusemannSeries::rows)
      .def_readonly("monotone", &BusemannSeries::monotone);

  py::class_<CertificateRow>(m, "CertificateRow")
      .def_readonly("l", &CertificateRow::l)
      .def_readonly("orbit_distance", &CertificateRow::orbit_distance)
      .def_readonly("b_lo", &CertificateRow::b_lo)
      .def_readonly("b_hi", &CertificateRow::b_hi)
      .def_readonly("bound_lo", &CertificateRow::bound_lo);

  py::class_<NonProperCertificate>(m, "NonProperCertificate")
      .def_readonly("family", &NonProperCertificate::family)
      .def_readonly("T_max", &NonProperCertificate::T_max)
      .def_readonly("epsilon", &NonProperCertificate::epsilon)
      .def_readonly("rows", &NonProperCertificate::rows)
      .def_readonly("L_strictly_increasing",
                    &NonProperCertificate::L_strictly_increasing)
      .def_readonly("intervals_within_eps",
                    &NonProperCertificate::intervals_within_eps)
      .def_readonly("verdict", &NonProperCertificate::verdict);

  py::class_<ConeRow>(m, "ConeRow")
      .def_readonly("l", &ConeRow::l)
      .def_readonly("L", &ConeRow::L)
      .def_readonly("R", &ConeRow::R)
      .def_readonly("R_over_L", &ConeRow::R_over_L)
      .def_readonly("A", &ConeRow::A);

  py::class_<ConeProbeResult>(m, "ConeProbeResult")
      .def_readonly("family", &ConeProbeResult::family)
      .def_readonly("rows", &ConeProbeResult::rows)
      .def_readonly("additivity_trend", &ConeProbeResult::additivity_trend)
      .def_readonly("ratio_trend", &ConeProbeResult::ratio_trend);

  m.def(
      "busemann_estimate",
      [](const WarpFamily& family, const py::object& table, long l,
         std::vector<double> T_list, double tol, int parallel) {
        return busemann_estimate(family, table_ptr(table), l, T_list, tol,
                                 parallel);
      },
      py::arg("family"), py::arg("table"), py::arg("l"), py::arg("T_list"),
      py::arg("tol") = 1e-9, py::arg("parallel") = 1);
  m.def(
      "nonproper_certificate",
      [](const WarpFamily& family, const py::object& table,
         std::vector<long> l_set, double T_max, double eps, double tol,
         int parallel) {
        return nonproper_certificate(family, table_ptr(table), l_set, T_max,
                                     eps, tol, parallel);
      },
      py::arg("family"), py::arg("table"), py::arg("l_set"), py::arg("T_max"),
      py::arg("eps"), py::arg("tol") = 1e-9, py::arg("parallel") = 1);
  m.def(
      "cone_probe",
      [](const WarpFamily& family, const py::object& table,
         std::vector<long> l_list, double tol, int parallel) {
        return cone_probe(family, table_ptr(table), l_list, tol, parallel);
      },
      py::arg("family"), py::arg("table"), py::arg("l_list"),
      py::arg("tol") = 1e-9, py::arg("parallel") = 1);
}
