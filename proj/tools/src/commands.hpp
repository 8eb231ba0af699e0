#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <set>
#include <string>

#include <roofkit/roofs.hpp>

#include "report.hpp"

namespace roofkit::cli {

struct VerifyOptions {
  Budget budget;          // seed is the master seed for every row
  std::size_t states = 10;  // corpus size for the gap and equality rows
  std::set<char> rows;      // empty: all of a..i
};

/// Runs the claim suite in row order. Sets `failed_row` to the first row that
/// did not pass (empty when all pass).
RunReport verify_paper(const VerifyOptions& options, std::string& failed_row);

}  // namespace roofkit::cli
