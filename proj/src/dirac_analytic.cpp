#include "confspec/dirac_analytic.hpp"

#include "confspec/errors.hpp"

namespace confspec {

std::string to_string(SpinStructure s) { return s == SpinStructure::Unique ? "unique" : "trivial"; }

SpinModel SpinModel::of(const ModelManifold& base) {
  if (base.is_sphere()) {
    const auto& s = base.sphere();
    return {base, SpinStructure::Unique, s.n / (2.0 * s.radius), true};
  }
  if (base.is_torus()) return {base, SpinStructure::Trivial, 0.0, false};
  throw UnsupportedInput("Dirac data is available for round spheres and flat tori only");
}

std::string SpinModel::closed_form() const {
  return base.is_sphere() ? "lambda1(D) = n/(2r)" : "lambda1(D) = 0 (parallel spinors)";
}

double dirac_lambda1(const SpinModel& m) { return m.lambda1_dirac; }

nlohmann::json to_json(const SpinModel& m) {
  return {{"base", m.base.describe()},
          {"spin_structure", to_string(m.spin_structure)},
          {"lambda1_dirac", m.lambda1_dirac},
          {"killing", m.killing},
          {"closed_form", m.closed_form()}};
}

namespace {

double friedrich_constant(int n) { return n / (4.0 * (n - 1.0)); }

void attach_model(InequalityReport& r, const SpinModel& m) { r.provenance["spin_model"] = to_json(m); }

}  // namespace

InequalityReport friedrich_check(const SpinModel& m, const Tolerances& tol) {
  const int n = m.dimension();
  InequalityReport r;
  r.theorem = "friedrich";
  r.scale_exponent = -2;
  const double lam = dirac_lambda1(m);
  r.lhs = lam * lam;
  r.rhs = friedrich_constant(n) * model_curvature(m.base).scalar_R;
  r.assumptions.push_back({"dimension_at_least_2", n >= 2, static_cast<double>(n), ""});
  settle(r, tol);
  if (r.equality != m.killing) {
    r.notes.push_back(m.killing ? "Killing spinor present but equality not reached"
                                : "degenerate equality: both sides vanish without a Killing spinor");
  }
  r.provenance["killing"] = m.killing;
  attach_model(r, m);
  return r;
}

InequalityReport hijazi_check(const SpinModel& m, double lamL, const Tolerances& tol, bool probe) {
  const int n = m.dimension();
  InequalityReport r;
  r.theorem = "hijazi";
  r.scale_exponent = -2;
  const double lam = dirac_lambda1(m);
  r.lhs = lam * lam;
  r.rhs = friedrich_constant(n) * lamL;
  r.assumptions.push_back({"dimension_at_least_2", n >= 2, static_cast<double>(n), ""});
  settle(r, tol, true, probe);
  if (probe)
    r.notes.push_back("same-conformal-class probe: lambda1(D) is the model value, lambda1(L) belongs to g_u");
  r.provenance["lambda1_L"] = lamL;
  r.provenance["killing"] = m.killing;
  attach_model(r, m);
  return r;
}

nlohmann::json registry_json() {
  nlohmann::json entries = nlohmann::json::array();
  entries.push_back({{"base", "RoundSphere(n, r)"},
                     {"spin_structure", "unique"},
                     {"lambda1_dirac", "n/(2r)"},
                     {"spectrum", "+-(n/2 + k)/r, k >= 0"},
                     {"killing", true}});
  entries.push_back({{"base", "FlatTorus(L_1..L_n)"},
                     {"spin_structure", "trivial"},
                     {"lambda1_dirac", "0"},
                     {"spectrum", "2 pi |k + 0|, k in dual lattice"},
                     {"killing", false}});
  entries.push_back({{"base", "FlatTorus(L_1..L_n)"},
                     {"spin_structure", "nontrivial"},
                     {"lambda1_dirac", "unsupported"},
                     {"spectrum", "2 pi |k + delta/2|, reserved slot"},
                     {"killing", false}});
  return entries;
}

}  // namespace confspec
