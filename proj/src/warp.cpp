#include "warplab/warp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "warplab/numerics/ode.hpp"
#include "warplab/numerics/quadrature.hpp"

namespace warplab {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCrossover = 1e-3;  // removable-singularity guard

}  // namespace

double atan_cubed_quotient(double u) {
  const double au = std::abs(u);
  if (au < kSeriesCrossover) {
    // atan(u^3)/u^2 = u - u^7/3 + u^13/5 - ...
    return u - (u * u * u * u * u * u * u) / 3.0;
  }
  return std::atan(u * u * u) / (u * u);
}

// d/du [atan(u^3)/u^2] = 3/(1+u^6) - 2 atan(u^3)/u^3
static double atan_cubed_quotient_deriv(double u) {
  const double au = std::abs(u);
  const double u6 = u * u * u * u * u * u;
  if (au < kSeriesCrossover) {
    // atan(u^3)/u^3 = 1 - u^6/3 + ...
    return 3.0 / (1.0 + u6) - 2.0 * (1.0 - u6 / 3.0);
  }
  return 3.0 / (1.0 + u6) - 2.0 * std::atan(u * u * u) / (u * u * u);
}

double phi(double x, double tol) {
  if (!std::isfinite(x) || x < 0.0) {
    throw InvalidInputError("phi: requires finite x >= 0");
  }
  if (tol <= 0.0) throw InvalidInputError("phi: tol must be positive");
  if (x == 0.0) return 0.0;
  if (x <= kSeriesCrossover) {
    // integral of the series: x^2/2 - x^8/24 + x^14/70
    const double x2 = x * x;
    const double x8 = x2 * x2 * x2 * x2;
    return (kSqrt3 / kPi) * (0.5 * x2 - x8 / 24.0);
  }
  const double head = 0.5 * kSeriesCrossover * kSeriesCrossover;
  auto quad = numerics::integrate_adaptive(
      [](double u) { return atan_cubed_quotient(u); }, kSeriesCrossover, x,
      tol * 0.5, tol * 0.1);
  return (kSqrt3 / kPi) * (head + quad.value);
}

// ---------------------------------------------------------------------------
// Theorem A table
// ---------------------------------------------------------------------------

namespace {

// f'' = -(sqrt3/2pi) atan(f^3)/f^2 (differentiating f'^2 = 1 - phi(f))
double theorem_a_fpp(double f) {
  return -(kSqrt3 / (2.0 * kPi)) * atan_cubed_quotient(f);
}

// f''' = -(sqrt3/2pi) f' [3/(1+f^6) - 2 atan(f^3)/f^3]
double theorem_a_fppp(double f, double fp) {
  const double f6 = f * f * f * f * f * f;
  double q3;  // atan(f^3)/f^3
  if (std::abs(f) < kSeriesCrossover) {
    q3 = 1.0 - f6 / 3.0;
  } else {
    q3 = std::atan(f * f * f) / (f * f * f);
  }
  return -(kSqrt3 / (2.0 * kPi)) * fp * (3.0 / (1.0 + f6) - 2.0 * q3);
}

template <class T>
struct Quintic {
  // value/derivatives of the two-point quintic Hermite interpolant
  T v, d1, d2;
};

// Quintic Hermite on [0, h] from (y, y', y'') at both ends, evaluated at s.
template <class T>
Quintic<T> quintic_hermite(T h, T y0, T d0, T s0, T y1, T d1, T s1, T s) {
  const T t = s / h;
  const T t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  // basis for y0, d0*h, s0*h^2/2, y1, d1*h, s1*h^2/2
  const T b0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const T b1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const T b2 = T(0.5) * (t2 - 3 * t3 + 3 * t4 - t5);
  const T b3 = 10 * t3 - 15 * t4 + 6 * t5;
  const T b4 = -4 * t3 + 7 * t4 - 3 * t5;
  const T b5 = T(0.5) * (t3 - 2 * t4 + t5);
  const T db0 = (-30 * t2 + 60 * t3 - 30 * t4) / h;
  const T db1 = (1 - 18 * t2 + 32 * t3 - 15 * t4) / h;
  const T db2 = T(0.5) * (2 * t - 9 * t2 + 12 * t3 - 5 * t4) / h;
  const T db3 = (30 * t2 - 60 * t3 + 30 * t4) / h;
  const T db4 = (-12 * t2 + 28 * t3 - 15 * t4) / h;
  const T db5 = T(0.5) * (3 * t2 - 8 * t3 + 5 * t4) / h;
  const T d2b0 = (-60 * t + 180 * t2 - 120 * t3) / (h * h);
  const T d2b1 = (-36 * t + 96 * t2 - 60 * t3) / (h * h);
  const T d2b2 = T(0.5) * (2 - 18 * t + 36 * t2 - 20 * t3) / (h * h);
  const T d2b3 = (60 * t - 180 * t2 + 120 * t3) / (h * h);
  const T d2b4 = (-24 * t + 84 * t2 - 60 * t3) / (h * h);
  const T d2b5 = T(0.5) * (6 * t - 24 * t2 + 20 * t3) / (h * h);
  const T c0 = y0, c1 = d0 * h, c2 = s0 * h * h, c3 = y1, c4 = d1 * h,
          c5 = s1 * h * h;
  Quintic<T> out;
  out.v = c0 * b0 + c1 * b1 + c2 * b2 + c3 * b3 + c4 * b4 + c5 * b5;
  out.d1 = c0 * db0 + c1 * db1 + c2 * db2 + c3 * db3 + c4 * db4 + c5 * db5;
  out.d2 =
      c0 * d2b0 + c1 * d2b1 + c2 * d2b2 + c3 * d2b3 + c4 * d2b4 + c5 * d2b5;
  return out;
}

}  // namespace

WarpTable build_theorem_a(double r_max, double tol) {
  if (!(r_max > 0.0)) throw InvalidInputError("build_theorem_a: r_max > 0");
  if (!(tol > 0.0)) throw InvalidInputError("build_theorem_a: tol > 0");

  WarpTable table;
  table.r_max_ = r_max;
  table.tol_ = tol;
  table.nodes_.push_back({0.0, 0.0, 0.0});

  auto rhs = [](double /*r*/, const numerics::StateVec<2>& y,
                numerics::StateVec<2>& dy) {
    const double P = std::min(y[1], 1.0);
    const double fp = std::sqrt(std::max(1.0 - P, 0.0));
    dy[0] = fp;
    dy[1] = (kSqrt3 / kPi) * atan_cubed_quotient(y[0]) * fp;
  };

  numerics::OdeOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol * 1e-2;
  opt.h_init = 1e-6;
  opt.h_max = 0.05;  // node spacing also caps interpolant jumps seen by FD oracles

  numerics::integrate<2>(
      rhs, 0.0, {0.0, 0.0}, r_max, opt,
      [&](double /*r0*/, double r1, const numerics::StateVec<2>& /*y0*/,
          const numerics::StateVec<2>& y1, const numerics::StateVec<2>&) {
        if (!(y1[1] < 1.0) || !(y1[0] > 0.0)) {
          throw NumericalError(
              "build_theorem_a: invariant violation (f' left (0,1])");
        }
        table.nodes_.push_back({r1, y1[0], y1[1]});
        return true;
      });
  return table;
}

std::size_t WarpTable::locate(double r) const {
  if (!(r >= 0.0) || r > r_max_ * (1.0 + 1e-12)) {
    throw InvalidInputError("WarpTable: r outside table range [0, " +
                            std::to_string(r_max_) + "]");
  }
  auto it = std::upper_bound(
      nodes_.begin(), nodes_.end(), r,
      [](double v, const Node& n) { return v < n.r; });
  std::size_t hi = static_cast<std::size_t>(it - nodes_.begin());
  if (hi == 0) hi = 1;
  if (hi >= nodes_.size()) hi = nodes_.size() - 1;
  return hi;  // interval [hi-1, hi]
}

WarpSample WarpTable::eval(double r) const {
  const std::size_t hi = locate(r);
  const Node& n0 = nodes_[hi - 1];
  const Node& n1 = nodes_[hi];
  const double span = n1.r - n0.r;

  auto derivs = [](const Node& n) {
    const double fp = std::sqrt(std::max(1.0 - n.P, 0.0));
    const double fpp = theorem_a_fpp(n.f);
    const double Pp = (kSqrt3 / kPi) * atan_cubed_quotient(n.f) * fp;
    const double Ppp = (kSqrt3 / kPi) * (atan_cubed_quotient_deriv(n.f) * fp * fp +
                                         atan_cubed_quotient(n.f) * fpp);
    return std::array<double, 4>{fp, fpp, Pp, Ppp};
  };
  const auto d0 = derivs(n0);
  const auto d1 = derivs(n1);
  const double s = r - n0.r;
  const Quintic<double> qf =
      quintic_hermite<double>(span, n0.f, d0[0], d0[1], n1.f, d1[0], d1[1], s);

  WarpSample out;
  out.r = r;
  out.f = (r == 0.0) ? 0.0 : qf.v;
  out.fp = (r == 0.0) ? 1.0 : qf.d1;
  out.fpp = theorem_a_fpp(out.f);
  out.fppp = theorem_a_fppp(out.f, out.fp);
  out.h = out.fp;
  out.hp = out.fpp;
  out.hpp = *out.fppp;
  return out;
}

double WarpTable::phi_state(double r) const {
  const std::size_t hi = locate(r);
  const Node& n0 = nodes_[hi - 1];
  const Node& n1 = nodes_[hi];
  const double span = n1.r - n0.r;
  auto derivs = [](const Node& n) {
    const double fp = std::sqrt(std::max(1.0 - n.P, 0.0));
    const double fpp = theorem_a_fpp(n.f);
    const double Pp = (kSqrt3 / kPi) * atan_cubed_quotient(n.f) * fp;
    const double Ppp = (kSqrt3 / kPi) * (atan_cubed_quotient_deriv(n.f) * fp * fp +
                                         atan_cubed_quotient(n.f) * fpp);
    return std::array<double, 4>{fp, fpp, Pp, Ppp};
  };
  const auto d0 = derivs(n0);
  const auto d1 = derivs(n1);
  return quintic_hermite<double>(span, n0.P, d0[2], d0[3], n1.P, d1[2], d1[3],
                                 r - n0.r)
      .v;
}

void WarpTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("WarpTable::save: cannot open " +
                                    path.string());
  out << "warplab-warp-table v1\n";
  out << "family " << family_tag_ << "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "tol %.17g\nr_max %.17g\nrows %zu\n", tol_,
                r_max_, nodes_.size());
  out << buf;
  for (const Node& n : nodes_) {
    const double fp = std::sqrt(std::max(1.0 - n.P, 0.0));
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", n.r, n.f, fp,
                  n.P);
    out << buf;
  }
}

WarpTable WarpTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("WarpTable::load: cannot open " +
                                   path.string());
  std::string magic, version;
  in >> magic >> version;
  if (magic != "warplab-warp-table" || version != "v1") {
    throw InvalidInputError("WarpTable::load: unrecognized format header");
  }
  WarpTable table;
  std::string key;
  std::size_t rows = 0;
  in >> key >> table.family_tag_;
  if (key != "family") throw InvalidInputError("WarpTable::load: bad header");
  in >> key >> table.tol_;
  if (key != "tol") throw InvalidInputError("WarpTable::load: bad header");
  in >> key >> table.r_max_;
  if (key != "r_max") throw InvalidInputError("WarpTable::load: bad header");
  in >> key >> rows;
  if (key != "rows") throw InvalidInputError("WarpTable::load: bad header");
  if (table.family_tag_ != "theorem-a") {
    throw InvalidInputError(
        "WarpTable::load: only theorem-a tables are supported");
  }
  table.nodes_.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double fp_stored;
    in >> table.nodes_[i].r >> table.nodes_[i].f >> fp_stored >>
        table.nodes_[i].P;
  }
  if (!in) throw InvalidInputError("WarpTable::load: truncated file");
  return table;
}

// ---------------------------------------------------------------------------
// Theorem B closed forms
// ---------------------------------------------------------------------------

WarpSample eval_theorem_b(double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw InvalidInputError("eval_theorem_b: requires finite r >= 0");
  }
  const double ln2 = std::numbers::ln2;
  const double sql = std::sqrt(ln2);
  const double w = 2.0 + r * r;
  const double L = std::log(w);
  const double Lp = 2.0 * r / w;
  const double Lpp = (4.0 - 2.0 * r * r) / (w * w);
  const double Lppp = -4.0 * r * (6.0 - r * r) / (w * w * w);

  const double g = 1.0 / std::sqrt(L);
  const double g3 = g * g * g;           // L^{-3/2}
  const double g5 = g3 * g * g;          // L^{-5/2}
  const double g7 = g5 * g * g;          // L^{-7/2}
  const double gp = -0.5 * g3 * Lp;
  const double gpp = 0.75 * g5 * Lp * Lp - 0.5 * g3 * Lpp;
  const double gppp =
      -15.0 / 8.0 * g7 * Lp * Lp * Lp + 2.25 * g5 * Lp * Lpp - 0.5 * g3 * Lppp;

  WarpSample out;
  out.r = r;
  out.f = sql * r * g;
  out.fp = sql * (g + r * gp);
  out.fpp = sql * (2.0 * gp + r * gpp);
  out.fppp = sql * (3.0 * gpp + r * gppp);
  out.h = 1.0 / L;
  out.hp = -Lp / (L * L);
  out.hpp = -Lpp / (L * L) + 2.0 * Lp * Lp / (L * L * L);
  out.hppp = -Lppp / (L * L) + 6.0 * Lp * Lpp / (L * L * L) -
             6.0 * Lp * Lp * Lp / (L * L * L * L);
  return out;
}

// ---------------------------------------------------------------------------
// WarpFamily
// ---------------------------------------------------------------------------

WarpFamily WarpFamily::theorem_a() {
  WarpFamily f;
  f.kind_ = WarpKind::TheoremA;
  return f;
}

WarpFamily WarpFamily::theorem_b() {
  WarpFamily f;
  f.kind_ = WarpKind::TheoremB;
  return f;
}

WarpFamily WarpFamily::flat(double fiber_size) {
  if (!(fiber_size > 0.0)) {
    throw InvalidInputError("WarpFamily::flat: fiber size must be positive");
  }
  WarpFamily f;
  f.kind_ = WarpKind::Flat;
  f.flat_c_ = fiber_size;
  return f;
}

WarpFamily WarpFamily::custom(std::shared_ptr<const WarpTable> table) {
  if (!table) throw InvalidInputError("WarpFamily::custom: null table");
  WarpFamily f;
  f.kind_ = WarpKind::Custom;
  f.table_ = std::move(table);
  return f;
}

WarpFamily WarpFamily::parse(const std::string& spec) {
  if (spec == "theorem-a") return theorem_a();
  if (spec == "theorem-b") return theorem_b();
  if (spec.rfind("flat:", 0) == 0) {
    const std::string num = spec.substr(5);
    std::size_t pos = 0;
    double c;
    try {
      c = std::stod(num, &pos);
    } catch (const std::exception&) {
      throw InvalidInputError("WarpFamily::parse: bad flat fiber size '" +
                              num + "'");
    }
    if (pos != num.size()) {
      throw InvalidInputError("WarpFamily::parse: bad flat fiber size '" +
                              num + "'");
    }
    return flat(c);
  }
  throw InvalidInputError(
      "WarpFamily::parse: expected theorem-a | theorem-b | flat:<c>, got '" +
      spec + "'");
}

std::string WarpFamily::name() const {
  switch (kind_) {
    case WarpKind::TheoremA: return "theorem-a";
    case WarpKind::TheoremB: return "theorem-b";
    case WarpKind::Flat: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "flat:%.17g", flat_c_);
      return buf;
    }
    case WarpKind::Custom: return "custom";
  }
  return "?";
}

WarpSample eval_warp(const WarpFamily& family, const WarpTable* table,
                     double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw InvalidInputError("eval_warp: requires finite r >= 0");
  }
  switch (family.kind()) {
    case WarpKind::TheoremA:
      if (table == nullptr) {
        throw InvalidInputError("eval_warp: TheoremA requires a WarpTable");
      }
      return table->eval(r);
    case WarpKind::TheoremB:
      return eval_theorem_b(r);
    case WarpKind::Flat: {
      WarpSample s;
      s.r = r;
      s.f = r;
      s.fp = 1.0;
      s.fpp = 0.0;
      s.fppp = 0.0;
      s.h = family.flat_fiber();
      s.hp = s.hpp = 0.0;
      s.hppp = 0.0;
      return s;
    }
    case WarpKind::Custom:
      return family.custom_table()->eval(r);
  }
  throw InvalidInputError("eval_warp: unknown family");
}

HbarSample eval_hbar(const WarpFamily& family, const WarpTable* table,
                     double r) {
  const double a = std::abs(r);
  const WarpSample s = eval_warp(family, table, a);
  HbarSample out;
  out.h = s.h;
  out.hp = (r < 0.0) ? -s.hp : s.hp;  // odd extension; hp(0) = 0
  out.hpp = s.hpp;
  return out;
}

namespace detail {

WarpValueLd eval_warp_ld(const WarpFamily& family, const WarpTable* table,
                         long double r) {
  WarpValueLd out;
  switch (family.kind()) {
    case WarpKind::Flat:
      out.f = r;
      out.h = static_cast<long double>(family.flat_fiber());
      return out;
    case WarpKind::TheoremB: {
      const long double ln2 = 0.69314718055994530942L;
      const long double L = std::log(2.0L + r * r);
      out.f = std::sqrt(ln2) * r / std::sqrt(L);
      out.h = 1.0L / L;
      return out;
    }
    case WarpKind::Custom:
      table = family.custom_table();
      [[fallthrough]];
    case WarpKind::TheoremA: {
      if (table == nullptr) {
        throw InvalidInputError("eval_warp_ld: TheoremA requires a table");
      }
      const auto& nodes = table->nodes();
      const double rd = static_cast<double>(r);
      auto it = std::upper_bound(
          nodes.begin(), nodes.end(), rd,
          [](double v, const WarpTable::Node& n) { return v < n.r; });
      std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
      if (hi == 0) hi = 1;
      if (hi >= nodes.size()) hi = nodes.size() - 1;
      const auto& n0 = nodes[hi - 1];
      const auto& n1 = nodes[hi];
      auto derivs = [](const WarpTable::Node& n) {
        const long double fp = std::sqrt(std::max(1.0L - (long double)n.P, 0.0L));
        const long double f = n.f;
        long double q;  // atan(f^3)/f^2
        if (f < 1e-3L) {
          q = f - (f * f * f * f * f * f * f) / 3.0L;
        } else {
          q = std::atan(f * f * f) / (f * f);
        }
        const long double fpp = -(1.7320508075688772935L / (2.0L * 3.14159265358979323846L)) * q;
        return std::pair<long double, long double>{fp, fpp};
      };
      const auto [fp0, fpp0] = derivs(n0);
      const auto [fp1, fpp1] = derivs(n1);
      const Quintic<long double> q = quintic_hermite<long double>(
          (long double)n1.r - (long double)n0.r, (long double)n0.f, fp0, fpp0,
          (long double)n1.f, fp1, fpp1, r - (long double)n0.r);
      out.f = q.v;
      out.h = q.d1;  // h = f'
      return out;
    }
  }
  throw InvalidInputError("eval_warp_ld: unknown family");
}

}  // namespace detail

}  // namespace warplab
