#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace roofkit::cli {

enum class Format { Table, Json, Csv };

struct ResultRow {
  std::string id;     // row tag, e.g. "(d)"; empty for single-result commands
  std::string claim;  // plain-language statement the row checks
  std::string quantity;
  double value = 0.0;
  std::optional<double> bracket;
  double tolerance = 0.0;
  std::string status;  // PASS, FAIL, INCONCLUSIVE, or a verdict / flag
};

struct RunReport {
  std::string command;
  std::string digest;  // FNV-1a of the inputs, hex
  std::uint64_t seed = 0;
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, std::string>> notes;  // extra key/value lines
  std::optional<std::string> payload;                     // JSON document (certificate, state)
};

std::string hex_digest(const std::string& bytes);

/// Deterministic rendering: identical reports give identical bytes.
void render(const RunReport& report, Format format, std::ostream& out);

}  // namespace roofkit::cli
