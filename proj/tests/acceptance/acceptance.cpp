// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line with its measured margin. Run everything or select
// one with --criterion N. Criterion 10 shells out to the CLI binary given
// via --cli PATH.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "warplab/asymptotics.hpp"
#include "warplab/cover.hpp"
#include "warplab/curvature.hpp"
#include "warplab/geodesic.hpp"
#include "warplab/warp.hpp"

using namespace warplab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& out, bool ok, const std::string& what) {
  if (!ok) {
    out.pass = false;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += what;
  }
}

std::shared_ptr<const WarpTable> g_table_a;  // shared across criteria

const WarpTable* table_a() {
  if (!g_table_a) {
    g_table_a =
        std::make_shared<const WarpTable>(build_theorem_a(1550.0, 1e-10));
  }
  return g_table_a.get();
}

char fmt_buf[256];
std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  std::snprintf(fmt_buf, sizeof fmt_buf, f, a, b, c);
  return fmt_buf;
}

// --------------------------------------------------------------------------
// 1. Flat sanity: finite-difference Ricci ~ 0, grid oracle ~ Euclidean
// --------------------------------------------------------------------------
Outcome criterion1() {
  Outcome out;
  const WarpFamily flat = WarpFamily::flat(1.0);
  const auto angles = default_oracle_angles(4);
  double worst = 0.0;
  for (double r : {0.5, 1.0, 5.0}) {
    const RicciSample s = ricci_fd_oracle(flat, nullptr, 4, r, angles);
    for (double v : {s.hh, s.uu, s.vv}) worst = std::max(worst, std::abs(v));
  }
  note(out, worst <= 1e-7,
       fmt("flat Ricci oracle max |value| = %.3g > 1e-7", worst));

  const double Y = 4.0;
  const double d_vert =
      grid_distance_oracle(flat, nullptr, {0.0, 0.0}, {0.0, Y}, Y / 200.0);
  note(out, std::abs(d_vert - Y) <= 0.02 * Y,
       fmt("flat vertical distance %.6f vs %.1f", d_vert, Y));
  const double d_diag =
      grid_distance_oracle(flat, nullptr, {0.0, 0.0}, {3.0, 2.0}, 0.02);
  const double euclid = std::sqrt(13.0);
  note(out, std::abs(d_diag - euclid) <= 0.02 * euclid,
       fmt("flat diagonal distance %.6f vs %.6f", d_diag, euclid));
  if (out.pass) {
    out.detail = fmt("max |Ricci| = %.2g, grid errors %.2g%% / %.2g%%", worst,
                     100.0 * std::abs(d_vert - Y) / Y,
                     100.0 * std::abs(d_diag - euclid) / euclid);
  }
  return out;
}

// --------------------------------------------------------------------------
// 2. Curvature oracle agreement across families
// --------------------------------------------------------------------------
Outcome criterion2() {
  Outcome out;
  const double radii[] = {0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0};
  struct Job {
    WarpFamily family;
    const WarpTable* table;
    int k;
  };
  const Job jobs[] = {{WarpFamily::theorem_a(), table_a(), 3},
                      {WarpFamily::theorem_a(), table_a(), 4},
                      {WarpFamily::theorem_b(), nullptr, 15}};
  double worst_rel = 0.0, worst_abs = 0.0;
  for (const auto& job : jobs) {
    const auto angles = default_oracle_angles(job.k);
    for (double r : radii) {
      const RicciSample closed =
          ricci_closed(eval_warp(job.family, job.table, r), job.k);
      const RicciSample oracle =
          ricci_fd_oracle(job.family, job.table, job.k, r, angles);
      const double pairs[3][2] = {{closed.hh, oracle.hh},
                                  {closed.uu, oracle.uu},
                                  {closed.vv, oracle.vv}};
      for (const auto& p : pairs) {
        const double err = std::abs(p[0] - p[1]);
        if (std::abs(p[0]) >= 1e-3) {
          worst_rel = std::max(worst_rel, err / std::abs(p[0]));
          note(out, err <= 1e-4 * std::abs(p[0]),
               job.family.name() +
                   fmt(" k=%g rel err %.3g at r=%.1f",
                       static_cast<double>(job.k), err / std::abs(p[0]), r));
        } else {
          worst_abs = std::max(worst_abs, err);
          note(out, err <= 1e-7,
               job.family.name() +
                   fmt(" k=%g abs err %.3g at r=%.1f",
                       static_cast<double>(job.k), err, r));
        }
      }
    }
  }
  if (out.pass) {
    out.detail =
        fmt("worst relative %.2g (<=1e-4), worst small-value absolute %.2g "
            "(<=1e-7)",
            worst_rel, worst_abs);
  }
  return out;
}

// --------------------------------------------------------------------------
// 3. Positivity claims on [0, 100] step 0.1
// --------------------------------------------------------------------------
Outcome criterion3() {
  Outcome out;
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(0.1 * i);
  struct Job {
    WarpFamily family;
    const WarpTable* table;
    int k;
  };
  const Job jobs[] = {{WarpFamily::theorem_a(), table_a(), 3},
                      {WarpFamily::theorem_a(), table_a(), 4},
                      {WarpFamily::theorem_b(), nullptr, 15}};
  std::string mins;
  for (const auto& job : jobs) {
    const CurvatureReport rep =
        positivity_scan(job.family, job.table, job.k, grid, 1e-12);
    const double m = std::min({rep.min_hh, rep.min_uu, rep.min_vv});
    note(out, m > 0.0,
         job.family.name() +
             fmt(" k=%g has min %.3g", static_cast<double>(job.k), m));
    note(out, rep.positive, job.family.name() + " scan verdict not positive");
    if (!mins.empty()) mins += ", ";
    mins += job.family.name() + " k=" + std::to_string(job.k) + " min " +
            fmt("%.3g", m);
  }
  if (out.pass) out.detail = mins;
  return out;
}

// --------------------------------------------------------------------------
// 4. Clairaut conservation and the sqrt(2) turning radius
// --------------------------------------------------------------------------
Outcome criterion4() {
  Outcome out;
  double worst_drift = 0.0;
  for (int which = 0; which < 2; ++which) {
    const WarpFamily fam =
        which ? WarpFamily::theorem_a() : WarpFamily::theorem_b();
    const WarpTable* tab = which ? table_a() : nullptr;
    const double h0 = eval_hbar(fam, tab, 0.0).h;
    for (int i = 0; i < 20; ++i) {
      const double theta = (std::numbers::pi / 2) * (i + 0.5) / 20.0;
      const GeodesicPath path =
          trace(fam, tab, {0.0, 0.0, std::cos(theta), std::sin(theta) / h0},
                1000.0, 1e-10);
      worst_drift = std::max(
          worst_drift, path.max_j_drift / (1.0 + std::abs(path.clairaut)));
    }
  }
  note(out, worst_drift <= 1e-8,
       fmt("max relative drift %.3g > 1e-8", worst_drift));

  // 60-degree launch from the parallel: J = h(0)/2, turning radius sqrt(2)
  const WarpFamily fam_b = WarpFamily::theorem_b();
  const double h0 = eval_hbar(fam_b, nullptr, 0.0).h;
  const double theta = std::numbers::pi / 6.0;  // 60 deg from the parallel
  const GeodesicPath path = trace(
      fam_b, nullptr, {0.0, 0.0, std::cos(theta), std::sin(theta) / h0},
      30.0, 1e-10);
  double worst_gap = 0.0;
  for (const auto& tp : path.turning_points) {
    worst_gap = std::max(worst_gap,
                         std::abs(std::abs(tp.r) - std::numbers::sqrt2));
  }
  note(out, !path.turning_points.empty(), "no turning point found");
  note(out, worst_gap <= 1e-6,
       fmt("|r* - sqrt(2)| = %.3g > 1e-6", worst_gap));
  if (out.pass) {
    out.detail = fmt("max drift %.2g over arclength 1e3 (40 launches), "
                     "|r* - sqrt2| = %.2g",
                     worst_drift, worst_gap);
  }
  return out;
}

// --------------------------------------------------------------------------
// 5. Sandwich bound T <= d(gamma^l p, c(T)) <= T + 2 pi l h(T)
// --------------------------------------------------------------------------
Outcome criterion5() {
  Outcome out;
  int checked = 0;
  for (int which = 0; which < 2; ++which) {
    const WarpFamily fam =
        which ? WarpFamily::theorem_a() : WarpFamily::theorem_b();
    const WarpTable* tab = which ? table_a() : nullptr;
    for (long l = 1; l <= 8; ++l) {
      for (double T : {10.0, 100.0, 1000.0}) {
        const double h_T = eval_warp(fam, tab, T).h;
        const DistanceResult d =
            distance_axis_to_point(fam, tab, l, {T, 0.0}, 1e-9);
        ++checked;
        note(out, d.value >= T,
             fmt("lower violation: d=%.12g < T=%g (l=%g)", d.value, T,
                 static_cast<double>(l)));
        note(out, d.value <= T + kTwoPi * l * h_T + 1e-9,
             fmt("upper violation: d=%.12g > %.12g (l=%g)", d.value,
                 T + kTwoPi * l * h_T, static_cast<double>(l)));
      }
    }
  }
  if (out.pass) {
    out.detail = fmt("zero violations over %g family/l/T combinations",
                     static_cast<double>(checked));
  }
  return out;
}

// --------------------------------------------------------------------------
// 6. Busemann convergence evidence and the phi tail
// --------------------------------------------------------------------------
Outcome criterion6() {
  Outcome out;
  const WarpFamily fam = WarpFamily::theorem_b();
  const std::vector<double> T_list = {10.0, 100.0, 1000.0};
  const BusemannSeries s = busemann_estimate(fam, nullptr, 1, T_list, 1e-9);
  note(out, s.monotone, "b^ series is not monotone non-decreasing");
  const double b1000 = s.rows.back().b_value;
  note(out, b1000 >= -0.4549 && b1000 <= 0.0,
       fmt("b^(1000) = %.6g outside [-0.4549, 0]", b1000));
  const double phi_tail = std::abs(phi(1000.0, 1e-12) - 1.0);
  note(out, phi_tail <= 2e-3, fmt("|phi(1000) - 1| = %.3g > 2e-3", phi_tail));
  if (out.pass) {
    out.detail = fmt("b^(10,100,1000) monotone, b^(1000) = %.3g, "
                     "|phi(1000)-1| = %.3g",
                     b1000, phi_tail);
  }
  return out;
}

// --------------------------------------------------------------------------
// 7. Non-properness certificate at T_max = 1e3
// --------------------------------------------------------------------------
Outcome criterion7() {
  Outcome out;
  const WarpFamily fam = WarpFamily::theorem_b();
  const std::vector<long> l_set = {1, 2, 4, 8, 16, 32};
  const NonProperCertificate cert =
      nonproper_certificate(fam, nullptr, l_set, 1000.0, 16.0, 1e-9, 4);
  note(out, cert.verdict == "non-proper evidence",
       "verdict: " + cert.verdict);
  note(out, cert.L_strictly_increasing, "L(l) not strictly increasing");
  for (const auto& row : cert.rows) {
    const double bound = -kTwoPi * row.l * eval_theorem_b(1000.0).h;
    note(out, row.b_lo >= bound - 1e-12 && row.b_hi <= 0.0,
         fmt("interval [%.6g, %.6g] escapes the covering bound", row.b_lo,
             row.b_hi));
  }
  if (out.pass) {
    out.detail =
        fmt("verdict non-proper evidence; L(1)=%.4g ... L(32)=%.5g, all "
            "intervals inside the covering bounds",
            cert.rows.front().orbit_distance.value,
            cert.rows.back().orbit_distance.value);
  }
  return out;
}

// --------------------------------------------------------------------------
// 8. Distance cross-validation and subadditivity
// --------------------------------------------------------------------------
Outcome criterion8() {
  Outcome out;
  const WarpFamily fam = WarpFamily::theorem_b();
  double worst = 0.0;
  for (long l : {1L, 2L, 4L}) {
    const double L = distance_axis(fam, nullptr, l, 1e-9).value;
    const double oracle = grid_distance_oracle(
        fam, nullptr, {0.0, 0.0}, {0.0, kTwoPi * l}, 0.02);
    const double rel = std::abs(L - oracle) / L;
    worst = std::max(worst, rel);
    note(out, rel <= 0.02,
         fmt("grid oracle off by %.3g%% at l=%g", 100.0 * rel,
             static_cast<double>(l)));
  }
  std::vector<double> L(33);
  for (long l = 0; l <= 32; ++l) {
    L[l] = distance_axis(fam, nullptr, l, 1e-9).value;
  }
  int violations = 0;
  for (long a = 1; a <= 16; ++a) {
    for (long b = 1; b <= 16; ++b) {
      if (L[a + b] > L[a] + L[b] + 1e-9) ++violations;
    }
  }
  note(out, violations == 0,
       fmt("%g subadditivity violations", static_cast<double>(violations)));
  if (out.pass) {
    out.detail = fmt("grid oracle within %.2g%%; zero subadditivity "
                     "violations for a, b <= 16",
                     100.0 * worst);
  }
  return out;
}

// --------------------------------------------------------------------------
// 9. Cone probe trends over dyadic l up to 128
// --------------------------------------------------------------------------
Outcome criterion9() {
  Outcome out;
  const WarpFamily fam = WarpFamily::theorem_b();
  std::vector<long> l_list;
  for (long l = 1; l <= 128; l *= 2) l_list.push_back(l);
  const ConeProbeResult probe = cone_probe(fam, nullptr, l_list, 1e-9, 4);
  for (const auto& row : probe.rows) {
    note(out, row.A <= 1.0,
         fmt("A(%g) = %.6f > 1", static_cast<double>(row.l), row.A));
  }
  for (std::size_t i = 1; i < probe.rows.size(); ++i) {
    const double gap_step =
        (1.0 - probe.rows[i].A) - (1.0 - probe.rows[i - 1].A);
    note(out, gap_step <= 1e-3,
         fmt("{1-A} rises by %.3g at l=%g", gap_step,
             static_cast<double>(probe.rows[i].l)));
    const double rl_step =
        probe.rows[i].R_over_L - probe.rows[i - 1].R_over_L;
    note(out, rl_step <= 1e-3,
         fmt("R/L rises by %.3g at l=%g", rl_step,
             static_cast<double>(probe.rows[i].l)));
  }
  note(out, probe.rows.back().R_over_L < probe.rows.front().R_over_L,
       "final R/L not strictly below the initial value");
  if (out.pass) {
    out.detail = fmt("A in [%.4f, %.4f], R/L %.4f -> %.4f",
                     probe.rows.front().A, probe.rows.back().A,
                     probe.rows.front().R_over_L);
  } else {
    out.detail += fmt("; A %.4f -> %.4f", probe.rows.front().A,
                      probe.rows.back().A);
    out.detail += fmt(", R/L %.6f -> %.6f", probe.rows.front().R_over_L,
                      probe.rows.back().R_over_L);
  }
  return out;
}

// --------------------------------------------------------------------------
// 10. Determinism of the CLI artifacts
// --------------------------------------------------------------------------
std::string g_cli_path;

std::string run_and_read(const std::string& args, const std::string& out_path,
                         bool* ok) {
  const std::string cmd =
      g_cli_path + " " + args + " --out " + out_path + " >/dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) {
    *ok = false;
    return "";
  }
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timestamp(const std::string& text) {
  std::stringstream in(text), out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# generated_at", 0) == 0) continue;
    if (line.find("\"generated_at\"") != std::string::npos) continue;
    out << line << "\n";
  }
  return out.str();
}

Outcome criterion10() {
  Outcome out;
  if (g_cli_path.empty()) {
    out.pass = false;
    out.detail = "pass --cli <path-to-warplab-binary>";
    return out;
  }
  const auto tmp = std::filesystem::temp_directory_path();
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"positivity scan (theorem-b k=15)",
       "curvature-scan --warp theorem-b --k 15 --r-stop 100 --r-step 0.1"},
      {"positivity scan (theorem-a k=3)",
       "curvature-scan --warp theorem-a --k 3 --r-stop 100 --r-step 0.1"},
      {"sandwich distances (theorem-b)",
       "busemann --warp theorem-b --l 8 --T 10,100,1000"},
      {"sandwich distances (theorem-a)",
       "busemann --warp theorem-a --l 8 --T 10,100,1000"},
      {"non-properness certificate",
       "nonproper-certify --warp theorem-b --lmax 32 --tmax 1000 --eps 16"},
  };
  for (const auto& [label, args] : runs) {
    bool ok = true;
    const std::string a =
        run_and_read(args, (tmp / "warplab_det_a.out").string(), &ok);
    const std::string b =
        run_and_read(args, (tmp / "warplab_det_b.out").string(), &ok);
    note(out, ok, label + ": CLI run failed");
    note(out, ok && !a.empty() && strip_timestamp(a) == strip_timestamp(b),
         label + ": outputs differ beyond the timestamp line");
  }
  std::filesystem::remove(tmp / "warplab_det_a.out");
  std::filesystem::remove(tmp / "warplab_det_b.out");
  if (out.pass) {
    out.detail = "3 artifact classes byte-identical modulo the timestamp";
  }
  return out;
}

const std::array<std::pair<const char*, std::function<Outcome()>>, 10>
    kCriteria = {{
        {"flat-family sanity (Ricci oracle, grid oracle)", criterion1},
        {"closed-form vs finite-difference Ricci", criterion2},
        {"Ricci positivity on [0, 100]", criterion3},
        {"Clairaut conservation and turning radius", criterion4},
        {"covering-distance sandwich bounds", criterion5},
        {"Busemann convergence evidence and phi tail", criterion6},
        {"non-properness certificate", criterion7},
        {"distance cross-validation and subadditivity", criterion8},
        {"asymptotic-cone probe trends", criterion9},
        {"deterministic artifacts", criterion10},
    }};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
    if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
  }
  int failures = 0;
  for (int i = 1; i <= 10; ++i) {
    if (only != 0 && i != only) continue;
    Outcome out;
    try {
      out = kCriteria[i - 1].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", out.pass ? "PASS" : "FAIL", i,
                kCriteria[i - 1].first, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}
