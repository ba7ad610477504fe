#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace confspec::cli {

// Closed-form sphere and torus values, each recomputed through the library.
nlohmann::json closed_form_table();

struct GoldenResult {
  bool pass = true;
  int compared = 0;
  std::vector<std::string> mismatches;  // "name: expected X, got Y"
};

// Relative tolerance, with an absolute floor for entries whose golden value is 0.
GoldenResult compare_golden(const nlohmann::json& golden, const nlohmann::json& computed, double rel_tol = 1e-9,
                            double zero_floor = 1e-12);

// Throws ConfigError when the file is missing or malformed.
GoldenResult golden_check(const std::string& path);

std::string default_golden_path();

}  // namespace confspec::cli
