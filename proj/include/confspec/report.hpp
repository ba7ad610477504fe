#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace confspec {

struct Tolerances {
  double tol_rel = 1e-7;
  double tol_abs = 1e-10;
  double eq_tol = 1e-6;
  // An eigenvalue counts as positive only above this threshold.
  double positivity = 1e-8;
};

enum class ReportStatus { Equality, Holds, Violated, Inapplicable, Probe, Inconclusive };

std::string to_string(ReportStatus s);

struct Assumption {
  std::string name;
  bool satisfied = true;
  double value = 0.0;
  std::string note;
};

// One inequality lhs >= rhs inside a chain.
struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
  bool equality = false;
  bool probe = false;  // compares data from different metrics; never pass/fail
};

ChainLink make_link(std::string name, double lhs, double rhs, const Tolerances& tol, bool probe = false);

struct InequalityReport {
  std::string theorem;
  std::optional<double> lhs;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
  bool equality = false;
  ReportStatus status = ReportStatus::Inconclusive;
  // Replacing u by u + c multiplies lhs and rhs by exp(scale_exponent * c).
  int scale_exponent = 0;
  std::vector<Assumption> assumptions;
  std::vector<ChainLink> links;
  std::vector<std::string> notes;
  nlohmann::json provenance = nlohmann::json::object();

  bool assumptions_satisfied() const;
  // A violated inequality whose assumptions all hold.
  bool is_failure() const { return status == ReportStatus::Violated; }
};

// Fills margin/holds/equality from lhs and rhs; status from assumptions,
// `solver_ok`, and `probe`.
void settle(InequalityReport& r, const Tolerances& tol, bool solver_ok = true, bool probe = false);

// Chain reports: lhs/rhs are the outer terms of the non-probe links (of all
// links when every one is a probe); verdicts come from non-probe links.
void settle_chain(InequalityReport& r, const Tolerances& tol, bool solver_ok = true);

nlohmann::json to_json(const InequalityReport& r);
std::string csv_header();
std::string csv_row(const InequalityReport& r, const std::string& case_id);

}  // namespace confspec
