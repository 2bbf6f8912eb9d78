#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "warplab/config.hpp"

namespace warplab {

/// 17-significant-digit decimal formatting used in every CSV cell.
std::string format_double(double v);

/// Writer for the deterministic CSV artifacts: a comment header carrying the
/// tool version, an optional timestamp, and the full config echo, then a
/// fixed-order header row and data rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const RunConfig& cfg,
            const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void comment(const std::string& line);

 private:
  std::ostream& os_;
  std::size_t columns_;
};

/// Stable-key-order JSON skeleton with version + config echo (and timestamp
/// unless suppressed); callers add their payload and emit with dump(2).
nlohmann::ordered_json json_skeleton(const RunConfig& cfg);

/// Opens cfg.out ("-" = stdout) and returns the stream.
struct OutputStream {
  std::ostream& stream();
  explicit OutputStream(const std::string& path);
  ~OutputStream();

 private:
  std::unique_ptr<std::ostream> file_;
};

std::string timestamp_utc();

}  // namespace warplab
