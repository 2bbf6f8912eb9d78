#include "warplab/output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

#include "warplab/errors.hpp"
#include "warplab/version.hpp"

namespace warplab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, const RunConfig& cfg,
                     const std::vector<std::string>& columns)
    : os_(os), columns_(columns.size()) {
  os_ << "# warplab " << kVersion << "\n";
  if (!cfg.no_timestamp) {
    os_ << "# generated_at " << timestamp_utc() << "\n";
  }
  for (const auto& [key, value] : cfg.echo()) {
    os_ << "# " << key << " = " << value << "\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os_ << (i ? "," : "") << columns[i];
  }
  os_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw InvalidInputError("CsvWriter: row width mismatch");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    os_ << (i ? "," : "") << cells[i];
  }
  os_ << "\n";
}

void CsvWriter::comment(const std::string& line) { os_ << "# " << line << "\n"; }

nlohmann::ordered_json json_skeleton(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["tool"] = "warplab";
  j["version"] = kVersion;
  if (!cfg.no_timestamp) j["generated_at"] = timestamp_utc();
  nlohmann::ordered_json echo;
  for (const auto& [key, value] : cfg.echo()) echo[key] = value;
  j["config"] = std::move(echo);
  return j;
}

OutputStream::OutputStream(const std::string& path) {
  if (path != "-") {
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw InvalidInputError("cannot open output file '" + path + "'");
    file_ = std::move(f);
  }
}

OutputStream::~OutputStream() = default;

std::ostream& OutputStream::stream() {
  if (file_) return *file_;
  return std::cout;
}

}  // namespace warplab
