#include "confspec/report.hpp"

#include <cmath>
#include <cstdio>

namespace confspec {

std::string to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::Equality: return "equality";
    case ReportStatus::Holds: return "holds";
    case ReportStatus::Violated: return "violated";
    case ReportStatus::Inapplicable: return "inapplicable";
    case ReportStatus::Probe: return "probe";
    case ReportStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

bool holds_within(double margin, double rhs, const Tolerances& tol) {
  return margin >= -tol.tol_abs - tol.tol_rel * std::abs(rhs);
}

bool equal_within(double margin, double rhs, const Tolerances& tol) {
  return std::abs(margin) <= tol.eq_tol * std::max(1.0, std::abs(rhs));
}

}  // namespace

ChainLink make_link(std::string name, double lhs, double rhs, const Tolerances& tol, bool probe) {
  ChainLink l;
  l.name = std::move(name);
  l.lhs = lhs;
  l.rhs = rhs;
  l.margin = lhs - rhs;
  l.holds = holds_within(l.margin, rhs, tol);
  l.equality = l.holds && equal_within(l.margin, rhs, tol);
  l.probe = probe;
  return l;
}

bool InequalityReport::assumptions_satisfied() const {
  for (const auto& a : assumptions)
    if (!a.satisfied) return false;
  return true;
}

void settle(InequalityReport& r, const Tolerances& tol, bool solver_ok, bool probe) {
  if (r.lhs) {
    r.margin = *r.lhs - r.rhs;
    r.holds = holds_within(r.margin, r.rhs, tol);
    r.equality = r.holds && equal_within(r.margin, r.rhs, tol);
  } else {
    r.margin = std::nan("");
    r.holds = false;
    r.equality = false;
  }
  if (!r.assumptions_satisfied())
    r.status = ReportStatus::Inapplicable;
  else if (!solver_ok)
    r.status = ReportStatus::Inconclusive;
  else if (probe)
    r.status = ReportStatus::Probe;
  else if (r.equality)
    r.status = ReportStatus::Equality;
  else if (r.holds)
    r.status = ReportStatus::Holds;
  else
    r.status = ReportStatus::Violated;
}

void settle_chain(InequalityReport& r, const Tolerances&, bool solver_ok) {
  // Outer terms of the judged links; probes only when nothing else is left.
  const ChainLink* first = nullptr;
  const ChainLink* last = nullptr;
  for (const auto& l : r.links)
    if (!l.probe) {
      if (!first) first = &l;
      last = &l;
    }
  if (!first && !r.links.empty()) {
    first = &r.links.front();
    last = &r.links.back();
  }
  if (first) {
    r.lhs = first->lhs;
    r.rhs = last->rhs;
  }
  r.margin = r.lhs ? *r.lhs - r.rhs : std::nan("");
  bool holds = true, equality = true, any_checked = false;
  for (const auto& l : r.links) {
    equality = equality && l.equality && !l.probe;
    if (l.probe) continue;
    any_checked = true;
    holds = holds && l.holds;
  }
  r.holds = holds;
  r.equality = any_checked && equality && holds;
  if (!r.assumptions_satisfied())
    r.status = ReportStatus::Inapplicable;
  else if (!solver_ok)
    r.status = ReportStatus::Inconclusive;
  else if (!any_checked)
    r.status = ReportStatus::Probe;
  else if (r.equality)
    r.status = ReportStatus::Equality;
  else if (r.holds)
    r.status = ReportStatus::Holds;
  else
    r.status = ReportStatus::Violated;
}

nlohmann::json to_json(const InequalityReport& r) {
  nlohmann::json j;
  j["theorem"] = r.theorem;
  j["lhs"] = r.lhs ? nlohmann::json(*r.lhs) : nlohmann::json(nullptr);
  j["rhs"] = r.rhs;
  j["margin"] = std::isfinite(r.margin) ? nlohmann::json(r.margin) : nlohmann::json(nullptr);
  j["holds"] = r.holds;
  j["equality"] = r.equality;
  j["status"] = to_string(r.status);
  j["scale_exponent"] = r.scale_exponent;
  j["assumptions"] = nlohmann::json::array();
  for (const auto& a : r.assumptions) {
    nlohmann::json ja{{"name", a.name}, {"satisfied", a.satisfied}, {"value", a.value}};
    if (!a.note.empty()) ja["note"] = a.note;
    j["assumptions"].push_back(ja);
  }
  if (!r.links.empty()) {
    j["links"] = nlohmann::json::array();
    for (const auto& l : r.links)
      j["links"].push_back({{"name", l.name},
                            {"lhs", l.lhs},
                            {"rhs", l.rhs},
                            {"margin", l.margin},
                            {"holds", l.holds},
                            {"equality", l.equality},
                            {"probe", l.probe}});
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  j["provenance"] = r.provenance;
  return j;
}

std::string csv_header() { return "case,theorem,lhs,rhs,margin,holds,equality,status"; }

std::string csv_row(const InequalityReport& r, const std::string& case_id) {
  auto num = [](double v) {
    if (!std::isfinite(v)) return std::string();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  return case_id + ',' + r.theorem + ',' + (r.lhs ? num(*r.lhs) : std::string()) + ',' + num(r.rhs) + ',' +
         num(r.margin) + ',' + (r.holds ? "true" : "false") + ',' + (r.equality ? "true" : "false") + ',' +
         to_string(r.status);
}

}  // namespace confspec
