#include "warplab/cli.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "warplab/asymptotics.hpp"
#include "warplab/config.hpp"
#include "warplab/curvature.hpp"
#include "warplab/cover.hpp"
#include "warplab/errors.hpp"
#include "warplab/geodesic.hpp"
#include "warplab/numerics/parallel.hpp"
#include "warplab/output.hpp"
#include "warplab/version.hpp"
#include "warplab/warp.hpp"

namespace warplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using ordered_json = nlohmann::ordered_json;

std::string fd(double v) { return format_double(v); }

struct FamilyRuntime {
  WarpFamily family;
  std::shared_ptr<const WarpTable> table;
  const WarpTable* ptr() const { return table.get(); }
};

/// Builds the TheoremA table when needed. r_needed comes from the
/// turning-radius bound of the experiment at hand and is recorded back into
/// the config echo via cfg.r_max.
FamilyRuntime make_runtime(RunConfig& cfg, double r_needed) {
  FamilyRuntime rt{cfg.family(), nullptr};
  if (rt.family.kind() == WarpKind::TheoremA) {
    cfg.r_max = std::max(cfg.r_max, r_needed);
    rt.table = std::make_shared<const WarpTable>(
        build_theorem_a(cfg.r_max, cfg.integrator_tol));
  }
  return rt;
}

std::vector<double> uniform_grid(double start, double stop, double step) {
  std::vector<double> grid;
  const long n = std::lround((stop - start) / step);
  grid.reserve(n + 1);
  for (long i = 0; i <= n; ++i) grid.push_back(start + i * step);
  return grid;
}

std::vector<long> dyadic_set(long l_max) {
  std::vector<long> out;
  for (long l = 1; l <= l_max; l *= 2) out.push_back(l);
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    out.push_back(std::stod(item, &pos));
    if (pos != item.size()) {
      throw InvalidInputError("bad number in list: '" + item + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int cmd_curvature_scan(RunConfig cfg) {
  FamilyRuntime rt = make_runtime(cfg, cfg.r_stop * 1.05 + 1.0);
  const auto grid = uniform_grid(0.0, cfg.r_stop, cfg.r_step);
  const CurvatureReport rep =
      positivity_scan(rt.family, rt.ptr(), cfg.k, grid, cfg.margin,
                      cfg.effective_parallel());
  OutputStream out(cfg.out);
  CsvWriter csv(out.stream(), cfg,
                {"r", "ricHH", "ricUU", "ricVV", "family", "k"});
  for (double r : grid) {
    const RicciSample s = ricci_closed(eval_warp(rt.family, rt.ptr(), r), cfg.k);
    csv.row({fd(r), fd(s.hh), fd(s.uu), fd(s.vv), rt.family.name(),
             std::to_string(cfg.k)});
  }
  csv.comment(std::string("verdict ") +
              (rep.positive ? "positive" : "not-positive") + " min_ricHH=" +
              fd(rep.min_hh) + " at_r=" + fd(rep.argmin_hh) + " min_ricUU=" +
              fd(rep.min_uu) + " at_r=" + fd(rep.argmin_uu) + " min_ricVV=" +
              fd(rep.min_vv) + " at_r=" + fd(rep.argmin_vv) + " margin=" +
              fd(rep.margin));
  return 0;
}

int cmd_curvature_oracle(RunConfig cfg, const std::string& r_list_text,
                         double step) {
  const std::vector<double> r_list = r_list_text.empty()
                                         ? std::vector<double>{0.2, 0.5, 1.0,
                                                               2.0, 5.0, 10.0,
                                                               30.0}
                                         : parse_double_list(r_list_text);
  double r_needed = 1.0;
  for (double r : r_list) r_needed = std::max(r_needed, r * 1.05 + 1.0);
  FamilyRuntime rt = make_runtime(cfg, r_needed);
  const auto angles = default_oracle_angles(cfg.k);

  OutputStream out(cfg.out);
  CsvWriter csv(out.stream(), cfg,
                {"r", "component", "closed", "oracle", "rel_error", "family",
                 "k"});
  for (double r : r_list) {
    const RicciSample closed =
        ricci_closed(eval_warp(rt.family, rt.ptr(), r), cfg.k);
    const RicciSample oracle =
        ricci_fd_oracle(rt.family, rt.ptr(), cfg.k, r, angles, step);
    const std::pair<const char*, std::pair<double, double>> rows[3] = {
        {"HH", {closed.hh, oracle.hh}},
        {"UU", {closed.uu, oracle.uu}},
        {"VV", {closed.vv, oracle.vv}}};
    for (const auto& [name, pair] : rows) {
      const double denom = std::max(std::abs(pair.first), 1e-300);
      csv.row({fd(r), name, fd(pair.first), fd(pair.second),
               fd(std::abs(pair.first - pair.second) / denom),
               rt.family.name(), std::to_string(cfg.k)});
    }
  }
  return 0;
}

int cmd_geodesic_trace(RunConfig cfg, double r0, double y0, double dr,
                       double dy) {
  FamilyRuntime rt =
      make_runtime(cfg, std::abs(r0) + cfg.trace_length + 1.0);
  // normalize the supplied direction to unit speed
  const double h = eval_hbar(rt.family, rt.ptr(), r0).h;
  const double speed = std::sqrt(dr * dr + h * h * dy * dy);
  if (!(speed > 0.0)) throw InvalidInputError("geodesic-trace: zero velocity");
  StripState start{r0, y0, dr / speed, dy / speed};
  const GeodesicPath path =
      trace(rt.family, rt.ptr(), start, cfg.trace_length, cfg.integrator_tol);
  OutputStream out(cfg.out);
  CsvWriter csv(out.stream(), cfg, {"s", "r", "y", "dr", "dy", "J_drift"});
  for (const auto& s : path.samples) {
    csv.row({fd(s.s), fd(s.r), fd(s.y), fd(s.dr), fd(s.dy), fd(s.j_drift)});
  }
  csv.comment("J=" + fd(path.clairaut) +
              " max_drift=" + fd(path.max_j_drift) + " turning_points=" +
              std::to_string(path.turning_points.size()) + " axis_crossings=" +
              std::to_string(path.axis_crossings.size()));
  return 0;
}

int cmd_clairaut_check(RunConfig cfg, int n_angles) {
  FamilyRuntime rt = make_runtime(cfg, cfg.trace_length + 1.0);
  const double h0 = eval_hbar(rt.family, rt.ptr(), 0.0).h;
  ordered_json j = json_skeleton(cfg);
  ordered_json rows = ordered_json::array();
  double max_drift = 0.0;
  for (int i = 0; i < n_angles; ++i) {
    const double theta =
        (std::numbers::pi / 2) * (i + 0.5) / static_cast<double>(n_angles);
    StripState start{0.0, 0.0, std::cos(theta), std::sin(theta) / h0};
    const GeodesicPath path = trace(rt.family, rt.ptr(), start,
                                    cfg.trace_length, cfg.integrator_tol);
    max_drift = std::max(max_drift, path.max_j_drift);
    ordered_json row;
    row["angle_rad"] = theta;
    row["J"] = path.clairaut;
    row["max_drift"] = path.max_j_drift;
    row["turning_points"] = path.turning_points.size();
    if (!path.turning_points.empty()) {
      double worst_gap = 0.0;
      for (const auto& tp : path.turning_points) {
        worst_gap = std::max(worst_gap, std::abs(tp.h_gap));
      }
      row["max_turning_gap"] = worst_gap;
      row["first_turning_radius"] = std::abs(path.turning_points.front().r);
    }
    rows.push_back(std::move(row));
  }
  j["angles"] = n_angles;
  j["trace_length"] = cfg.trace_length;
  j["max_drift"] = max_drift;
  j["rows"] = std::move(rows);
  OutputStream out(cfg.out);
  out.stream() << j.dump(2) << "\n";
  return 0;
}

ordered_json distance_json(const DistanceResult& d) {
  ordered_json j;
  j["value"] = d.value;
  j["lower_bound"] = d.lower_bound;
  j["upper_bound"] = d.upper_bound;
  j["method"] = to_string(d.method);
  if (d.geodesic) {
    j["J"] = d.geodesic->J;
    j["half_oscillations"] = d.geodesic->half_oscillations;
    j["r_star"] = d.geodesic->r_star;
  }
  j["degraded"] = d.degraded;
  j["failed_branches"] = d.failed_branches;
  return j;
}

int cmd_distance(RunConfig cfg, std::optional<double> t) {
  const double t_val = t.value_or(0.0);
  FamilyRuntime rt = make_runtime(
      cfg, std::max(1.5 * t_val + 10.0,
                    std::numbers::pi * static_cast<double>(cfg.l) * 1.05 + 10.0));
  DistanceResult d;
  if (t && *t > 0.0) {
    d = distance_axis_to_point(rt.family, rt.ptr(), cfg.l, {*t, 0.0},
                               cfg.distance_tol);
  } else {
    d = distance_axis(rt.family, rt.ptr(), cfg.l, cfg.distance_tol);
  }
  ordered_json j = json_skeleton(cfg);
  j["l"] = cfg.l;
  if (t) j["t"] = *t;
  j["distance"] = distance_json(d);
  OutputStream out(cfg.out);
  out.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_distance_table(RunConfig cfg) {
  FamilyRuntime rt = make_runtime(
      cfg,
      std::numbers::pi * static_cast<double>(cfg.l_max) * 1.05 + 10.0);
  std::vector<DistanceResult> results(cfg.l_max + 1);
  std::vector<long> ls(cfg.l_max + 1);
  for (long l = 0; l <= cfg.l_max; ++l) ls[l] = l;
  numerics::parallel_for(results.size(), cfg.effective_parallel(),
                         [&](std::size_t i) {
                           results[i] = distance_axis(rt.family, rt.ptr(),
                                                      ls[i], cfg.distance_tol);
                         });
  OutputStream out(cfg.out);
  CsvWriter csv(out.stream(), cfg,
                {"l", "L", "lower", "upper", "method", "n", "J", "r_star"});
  for (long l = 0; l <= cfg.l_max; ++l) {
    const DistanceResult& d = results[l];
    csv.row({std::to_string(l), fd(d.value), fd(d.lower_bound),
             fd(d.upper_bound), to_string(d.method),
             std::to_string(d.geodesic ? d.geodesic->half_oscillations : 0),
             fd(d.geodesic ? d.geodesic->J : 0.0),
             fd(d.geodesic ? d.geodesic->r_star : 0.0)});
  }
  return 0;
}

int cmd_busemann(RunConfig cfg) {
  double t_need = 0.0;
  for (double T : cfg.T_list) t_need = std::max(t_need, T);
  FamilyRuntime rt = make_runtime(cfg, 1.5 * t_need + 10.0);
  const BusemannSeries series =
      busemann_estimate(rt.family, rt.ptr(), cfg.l, cfg.T_list,
                        cfg.distance_tol, cfg.effective_parallel());
  OutputStream out(cfg.out);
  CsvWriter csv(out.stream(), cfg,
                {"l", "T", "b_hat_low", "b_hat_high", "bound_low"});
  for (const auto& row : series.rows) {
    csv.row({std::to_string(series.l), fd(row.T), fd(row.b_lo), fd(row.b_hi),
             fd(row.bound_lo)});
  }
  csv.comment(std::string("monotone=") + (series.monotone ? "true" : "false"));
  return 0;
}

int cmd_nonproper_certify(RunConfig cfg) {
  FamilyRuntime rt = make_runtime(
      cfg, std::max(1.5 * cfg.T_max + 10.0,
                    std::numbers::pi * static_cast<double>(cfg.l_max) * 1.05 +
                        10.0));
  const auto l_set = dyadic_set(cfg.l_max);
  const NonProperCertificate cert = nonproper_certificate(
      rt.family, rt.ptr(), l_set, cfg.T_max, cfg.eps, cfg.distance_tol,
      cfg.effective_parallel());
  ordered_json j = json_skeleton(cfg);
  j["family"] = cert.family;
  j["T_max"] = cert.T_max;
  j["epsilon"] = cert.epsilon;
  j["scale_note"] =
      "evidence at scale T_max; intervals follow the covering bounds";
  ordered_json rows = ordered_json::array();
  for (const auto& row : cert.rows) {
    ordered_json r;
    r["l"] = row.l;
    r["L"] = row.orbit_distance.value;
    r["L_lower"] = row.orbit_distance.lower_bound;
    r["L_upper"] = row.orbit_distance.upper_bound;
    r["b_hat_low"] = row.b_lo;
    r["b_hat_high"] = row.b_hi;
    r["bound_low"] = row.bound_lo;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["L_strictly_increasing"] = cert.L_strictly_increasing;
  j["intervals_within_eps"] = cert.intervals_within_eps;
  j["verdict"] = cert.verdict;
  OutputStream out(cfg.out);
  out.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_cone_probe(RunConfig cfg) {
  FamilyRuntime rt = make_runtime(
      cfg, std::numbers::pi * static_cast<double>(2 * cfg.l_max) * 1.05 +
               10.0);
  const auto l_list = dyadic_set(cfg.l_max);
  const ConeProbeResult probe =
      cone_probe(rt.family, rt.ptr(), l_list, cfg.distance_tol,
                 cfg.effective_parallel());
  OutputStream out(cfg.out);
  CsvWriter csv(out.stream(), cfg, {"l", "L", "R", "R_over_L", "A"});
  for (const auto& row : probe.rows) {
    csv.row({std::to_string(row.l), fd(row.L), fd(row.R), fd(row.R_over_L),
             fd(row.A)});
  }
  csv.comment(std::string("additivity_trend=") +
              (probe.additivity_trend ? "non-increasing" : "violated") +
              " ratio_trend=" +
              (probe.ratio_trend ? "non-increasing" : "violated"));
  return 0;
}

int cmd_selftest(RunConfig cfg) {
  OutputStream out(cfg.out);
  std::ostream& os = out.stream();
  auto check = [&](bool ok, const std::string& what) {
    os << (ok ? "ok " : "FAIL ") << what << "\n";
    if (!ok) throw NumericalError("selftest failed: " + what);
  };

  const WarpFamily flat = WarpFamily::flat(1.0);
  // flat warp and curvature
  const WarpSample fs = eval_warp(flat, nullptr, 2.0);
  check(fs.f == 2.0 && fs.fp == 1.0 && fs.h == 1.0, "flat warp sample");
  const RicciSample rc = ricci_closed(fs, 4);
  check(rc.hh == 0.0 && rc.uu == 0.0 && rc.vv == 0.0, "flat closed Ricci");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> angle_dist(0.5, std::numbers::pi - 0.5);
  std::vector<double> angles(3);
  for (auto& a : angles) a = angle_dist(rng);
  const RicciSample ro = ricci_fd_oracle(flat, nullptr, 4, 1.0, angles);
  check(std::abs(ro.hh) <= 1e-7 && std::abs(ro.uu) <= 1e-7 &&
            std::abs(ro.vv) <= 1e-7,
        "flat finite-difference Ricci ~ 0");

  // flat strip distances: vertical segment of length Y
  const double Y = 3.0;
  const double oracle = grid_distance_oracle(flat, nullptr, {0.0, 0.0},
                                             {0.0, Y}, Y / 200.0);
  check(std::abs(oracle - Y) <= 0.02 * Y, "flat grid oracle ~ Euclidean");

  // radial trace stays radial
  const GeodesicPath ray =
      trace(flat, nullptr, {0.0, 0.0, 1.0, 0.0}, 10.0, 1e-10);
  check(std::abs(ray.samples.back().r - 10.0) < 1e-9 &&
            std::abs(ray.samples.back().y) < 1e-12,
        "flat radial trace");

  // theorem-b boundary values
  const WarpSample b0 = eval_theorem_b(0.0);
  check(b0.f == 0.0 && std::abs(b0.fp - 1.0) < 1e-15 &&
            std::abs(b0.h - 1.4426950408889634) < 1e-12 && b0.hp == 0.0,
        "theorem-b boundary conditions");

  // theorem-a short table: boundary conditions and phi consistency
  const WarpTable table = build_theorem_a(5.0, 1e-10);
  const WarpSample a0 = table.eval(0.0);
  check(a0.f == 0.0 && std::abs(a0.fp - 1.0) < 1e-10 &&
            std::abs(a0.fpp) < 1e-10,
        "theorem-a boundary conditions");
  const WarpSample a2 = table.eval(2.0);
  check(std::abs(table.phi_state(2.0) - phi(a2.f, 1e-13)) < 1e-9,
        "theorem-a phi consistency");

  os << "selftest passed\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"warplab: warped-product curvature, geodesic and "
               "covering-distance laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // flag values arrive as strings and flow through the config validator
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  auto add_cfg_opt = [&](CLI::App* cmd, const std::string& flag,
                         const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [&overrides, key](const std::string& v) {
          overrides.emplace_back(key, v);
        },
        help);
  };

  std::string subcommand_name;
  int exit_code = 0;
  std::optional<double> opt_t;
  std::string r_list_text;
  double oracle_step = 1e-4;
  int n_angles = 20;
  double r0 = 0.0, y0 = 0.0, dr0 = 1.0, dy0 = 0.0;

  struct SubSpec {
    const char* name;
    const char* help;
  };
  const SubSpec specs[] = {
      {"curvature-scan", "closed-form Ricci scan with positivity verdict"},
      {"curvature-oracle",
       "closed-form vs finite-difference Ricci comparison"},
      {"geodesic-trace", "trace one strip geodesic to CSV"},
      {"clairaut-check", "Clairaut drift summary over a fan of launches"},
      {"distance", "one covering-space distance as JSON"},
      {"distance-table", "orbit distances L(l) for l = 0..l_max"},
      {"busemann", "Busemann approximants along the radial ray"},
      {"nonproper-certify", "non-properness certificate JSON"},
      {"cone-probe", "asymptotic-cone probe rows"},
      {"selftest", "quick flat-family sanity suite"},
  };
  for (const auto& spec : specs) {
    CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
    cmd->add_option("--config", config_path, "key = value config file");
    add_cfg_opt(cmd, "--warp", "warp", "theorem-a | theorem-b | flat:<c>");
    add_cfg_opt(cmd, "--k", "k", "sphere dimension parameter (k >= 2)");
    add_cfg_opt(cmd, "--integrator-tol", "integrator_tol", "ODE tolerance");
    add_cfg_opt(cmd, "--quadrature-tol", "quadrature_tol",
                "quadrature tolerance");
    add_cfg_opt(cmd, "--distance-tol", "distance_tol",
                "distance solver tolerance");
    add_cfg_opt(cmd, "--r-max", "r_max", "warp table extent");
    add_cfg_opt(cmd, "--grid-resolution", "grid_resolution",
                "grid oracle resolution");
    add_cfg_opt(cmd, "--r-step", "r_step", "curvature scan step");
    add_cfg_opt(cmd, "--r-stop", "r_stop", "curvature scan end");
    add_cfg_opt(cmd, "--margin", "margin", "positivity margin");
    add_cfg_opt(cmd, "--l", "l", "deck power");
    add_cfg_opt(cmd, "--lmax", "l_max", "largest deck power");
    add_cfg_opt(cmd, "--T", "T_list", "comma-separated ray parameters");
    add_cfg_opt(cmd, "--tmax", "T_max", "Busemann scale");
    add_cfg_opt(cmd, "--eps", "eps", "certificate tolerance");
    add_cfg_opt(cmd, "--length", "trace_length", "trace arclength");
    add_cfg_opt(cmd, "--seed", "seed", "spot-check RNG seed");
    add_cfg_opt(cmd, "--parallel", "parallel", "worker threads (0 = auto)");
    add_cfg_opt(cmd, "--out", "out", "output path ('-' = stdout)");
    cmd->add_flag("--no-timestamp",
                  [&overrides](std::int64_t) {
                    overrides.emplace_back("no_timestamp", "true");
                  },
                  "suppress the timestamp header line");
    if (spec.name == std::string("distance")) {
      cmd->add_option("--t", opt_t, "radial target t (omit for orbit L(l))");
    }
    if (spec.name == std::string("curvature-oracle")) {
      cmd->add_option("--r-list", r_list_text, "comma-separated radii");
      cmd->add_option("--step", oracle_step, "finite-difference step");
    }
    if (spec.name == std::string("clairaut-check")) {
      cmd->add_option("--angles", n_angles, "number of launch angles");
    }
    if (spec.name == std::string("geodesic-trace")) {
      cmd->add_option("--r0", r0, "initial radius");
      cmd->add_option("--y0", y0, "initial fiber coordinate");
      cmd->add_option("--dr", dr0, "initial radial velocity");
      cmd->add_option("--dy", dy0, "initial fiber velocity");
    }
    cmd->callback([&, name = std::string(spec.name)] { subcommand_name = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& [key, value] : overrides) {
      apply_config_entry(cfg, key, value);
    }
    cfg.validate();

    if (subcommand_name == "curvature-scan") {
      exit_code = cmd_curvature_scan(cfg);
    } else if (subcommand_name == "curvature-oracle") {
      exit_code = cmd_curvature_oracle(cfg, r_list_text, oracle_step);
    } else if (subcommand_name == "geodesic-trace") {
      exit_code = cmd_geodesic_trace(cfg, r0, y0, dr0, dy0);
    } else if (subcommand_name == "clairaut-check") {
      exit_code = cmd_clairaut_check(cfg, n_angles);
    } else if (subcommand_name == "distance") {
      exit_code = cmd_distance(cfg, opt_t);
    } else if (subcommand_name == "distance-table") {
      exit_code = cmd_distance_table(cfg);
    } else if (subcommand_name == "busemann") {
      exit_code = cmd_busemann(cfg);
    } else if (subcommand_name == "nonproper-certify") {
      exit_code = cmd_nonproper_certify(cfg);
    } else if (subcommand_name == "cone-probe") {
      exit_code = cmd_cone_probe(cfg);
    } else if (subcommand_name == "selftest") {
      exit_code = cmd_selftest(cfg);
    } else {
      std::cerr << "unknown subcommand\n";
      return 1;
    }
  } catch (const InvalidInputError& e) {
    ordered_json diag;
    diag["error_type"] = "invalid-input";
    diag["message"] = e.what();
    diag["subcommand"] = subcommand_name;
    std::cerr << diag.dump(2) << "\n";
    return 1;
  } catch (const NumericalError& e) {
    ordered_json diag;
    diag["error_type"] = "numerical";
    diag["message"] = e.what();
    diag["subcommand"] = subcommand_name;
    std::cerr << diag.dump(2) << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace warplab
