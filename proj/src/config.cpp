#include "warplab/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "warplab/errors.hpp"

namespace warplab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidInputError("config: key '" + key + "' expects a number, got '"
                            + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidInputError("config: key '" + key +
                            "' expects an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) {
    throw InvalidInputError("config: key '" + key + "' expects a list");
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "warp") {
    WarpFamily::parse(value);  // validates
    cfg.warp = value;
  } else if (key == "k") {
    cfg.k = static_cast<int>(parse_long(key, value));
  } else if (key == "integrator_tol") {
    cfg.integrator_tol = parse_double(key, value);
  } else if (key == "quadrature_tol") {
    cfg.quadrature_tol = parse_double(key, value);
  } else if (key == "distance_tol") {
    cfg.distance_tol = parse_double(key, value);
  } else if (key == "r_max") {
    cfg.r_max = parse_double(key, value);
  } else if (key == "grid_resolution") {
    cfg.grid_resolution = parse_double(key, value);
  } else if (key == "r_step") {
    cfg.r_step = parse_double(key, value);
  } else if (key == "r_stop") {
    cfg.r_stop = parse_double(key, value);
  } else if (key == "margin") {
    cfg.margin = parse_double(key, value);
  } else if (key == "l") {
    cfg.l = parse_long(key, value);
  } else if (key == "l_max") {
    cfg.l_max = parse_long(key, value);
  } else if (key == "T_list") {
    cfg.T_list = parse_list(key, value);
  } else if (key == "T_max") {
    cfg.T_max = parse_double(key, value);
  } else if (key == "eps") {
    cfg.eps = parse_double(key, value);
  } else if (key == "trace_length") {
    cfg.trace_length = parse_double(key, value);
  } else if (key == "seed") {
    cfg.seed = static_cast<unsigned long>(parse_long(key, value));
  } else if (key == "parallel") {
    cfg.parallel = static_cast<int>(parse_long(key, value));
  } else if (key == "no_timestamp") {
    if (value == "true" || value == "1") cfg.no_timestamp = true;
    else if (value == "false" || value == "0") cfg.no_timestamp = false;
    else throw InvalidInputError("config: no_timestamp expects true/false");
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw InvalidInputError("config: unknown key '" + key + "'");
  }
}

void RunConfig::validate() const {
  WarpFamily::parse(warp);
  if (k < 2) throw InvalidInputError("config: k must be >= 2");
  for (auto [name, v] : {std::pair<const char*, double>{"integrator_tol", integrator_tol},
                         {"quadrature_tol", quadrature_tol},
                         {"distance_tol", distance_tol},
                         {"r_max", r_max},
                         {"grid_resolution", grid_resolution},
                         {"r_step", r_step},
                         {"margin", margin},
                         {"eps", eps},
                         {"trace_length", trace_length}}) {
    if (!(v > 0.0)) {
      throw InvalidInputError(std::string("config: ") + name +
                              " must be positive");
    }
  }
  if (l < 0 || l_max < 0) throw InvalidInputError("config: l must be >= 0");
  if (parallel < 0) throw InvalidInputError("config: parallel must be >= 0");
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    if (!(T_list[i] > 0.0) || (i > 0 && !(T_list[i] > T_list[i - 1]))) {
      throw InvalidInputError("config: T_list must be positive increasing");
    }
  }
}

int RunConfig::effective_parallel() const {
  if (parallel > 0) return parallel;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::string t_list;
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    if (i) t_list += ",";
    t_list += fmt(T_list[i]);
  }
  return {
      {"warp", warp},
      {"k", std::to_string(k)},
      {"integrator_tol", fmt(integrator_tol)},
      {"quadrature_tol", fmt(quadrature_tol)},
      {"distance_tol", fmt(distance_tol)},
      {"r_max", fmt(r_max)},
      {"grid_resolution", fmt(grid_resolution)},
      {"r_step", fmt(r_step)},
      {"r_stop", fmt(r_stop)},
      {"margin", fmt(margin)},
      {"l", std::to_string(l)},
      {"l_max", std::to_string(l_max)},
      {"T_list", t_list},
      {"T_max", fmt(T_max)},
      {"eps", fmt(eps)},
      {"trace_length", fmt(trace_length)},
      {"seed", std::to_string(seed)},
      {"parallel", std::to_string(parallel)},
  };
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("config: cannot open '" + path.string() + "'");
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError("config: line " + std::to_string(line_no) +
                              " is not 'key = value'");
    }
    apply_config_entry(base, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  base.validate();
  return base;
}

}  // namespace warplab
