#include "confspec/cli/golden.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "confspec/errors.hpp"
#include "confspec/inequality_lab.hpp"

#ifndef CONFSPEC_GOLDEN_PATH
#define CONFSPEC_GOLDEN_PATH "golden/closed_form.json"
#endif

namespace confspec::cli {

std::string default_golden_path() { return CONFSPEC_GOLDEN_PATH; }

namespace {

std::string s(int n) { return "s" + std::to_string(n); }

void closed_forms(nlohmann::json& t) {
  for (int n = 2; n <= 8; ++n) {
    const ModelManifold m = ModelManifold::round_sphere(n, 1.0);
    const CurvatureData c = model_curvature(m);
    t[s(n) + ".volume"] = m.volume();
    t[s(n) + ".scalar_R"] = c.scalar_R;
    if (c.q_value) t[s(n) + ".q"] = *c.q_value;
    const SpinModel spin = SpinModel::of(m);
    t[s(n) + ".lambda1_D"] = dirac_lambda1(spin);
    const InequalityReport f = friedrich_check(spin);
    t["friedrich." + s(n) + ".lhs"] = *f.lhs;
    t["friedrich." + s(n) + ".rhs"] = f.rhs;
    if (n >= 3) {
      const InequalityReport h = hijazi_check(spin, c.scalar_R);
      t["hijazi." + s(n) + ".rhs"] = h.rhs;
      t[s(n) + ".yamabe"] = c.scalar_R * std::pow(m.volume(), 2.0 / n);
    }
    if (n >= 5) {
      t["paneitz.alpha.n" + std::to_string(n)] = paneitz_alpha(n);
      t["paneitz.beta.n" + std::to_string(n)] = paneitz_beta(n);
      t[s(n) + ".lambda1_P"] = 0.5 * (n - 4.0) * *c.q_value;
    }
  }
  t["s2r2.lambda1_D"] = SpinModel::round_sphere(2, 2.0).lambda1_dirac;
  const InequalityReport f2 = friedrich_check(SpinModel::round_sphere(2, 2.0));
  t["friedrich.s2r2.lhs"] = *f2.lhs;
  t["friedrich.s2r2.rhs"] = f2.rhs;
  t["s4.total_q"] = *model_curvature(ModelManifold::round_sphere(4, 1.0)).q_value * unit_sphere_volume(4);
  t["s4.cgb"] = 2.0 * t["s4.total_q"].get<double>();
  {
    const int n = 5;
    const double vol = unit_sphere_volume(n);
    const double lam = SpinModel::round_sphere(n, 1.0).lambda1_dirac;
    t["s5.yamabe_chain.dirac_lhs"] = lam * lam * std::pow(vol, 2.0 / n);
    t["s5.yamabe_chain.dirac_rhs"] = n / (4.0 * (n - 1.0)) * t["s5.yamabe"].get<double>();
  }
  for (int n : {4, 5}) {
    const ModelManifold m = ModelManifold::flat_torus(n, 1.0);
    const CurvatureData c = model_curvature(m);
    const SpinModel spin = SpinModel::of(m);
    t["t" + std::to_string(n) + ".volume"] = m.volume();
    t["t" + std::to_string(n) + ".scalar_R"] = c.scalar_R;
    t["t" + std::to_string(n) + ".q"] = *c.q_value;
    t["t" + std::to_string(n) + ".lambda1_D"] = dirac_lambda1(spin);
    t["friedrich.t" + std::to_string(n) + ".lhs"] = *friedrich_check(spin).lhs;
  }
}

void put_report(nlohmann::json& t, const std::string& key, const InequalityReport& r) {
  if (r.links.empty()) {
    t[key + ".lhs"] = r.lhs ? *r.lhs : std::nan("");
    t[key + ".rhs"] = r.rhs;
    return;
  }
  for (const auto& l : r.links) {
    t[key + "." + l.name + ".lhs"] = l.lhs;
    t[key + "." + l.name + ".rhs"] = l.rhs;
  }
}

void numeric(nlohmann::json& t) {
  const auto s4 = build_zonal_sphere(4, 1.0, 64);
  const auto s4r2 = build_zonal_sphere(4, 2.0, 64);
  const auto s5 = build_zonal_sphere(5, 1.0, 64);
  const auto s6 = build_zonal_sphere(6, 1.0, 64);
  const auto t4 = build_torus({1.0, 1.0, 1.0, 1.0}, 8);
  const ConformalMetric g4 = ConformalMetric::base(s4), g5 = ConformalMetric::base(s5);
  const ConformalMetric g6 = ConformalMetric::base(s6), g4r2 = ConformalMetric::base(s4r2);

  t["num.s4.lambda1_L"] = lambda1_yamabe(g4).eigenvalue;
  t["num.s4.total_q"] = total_q_curvature(g4);
  t["num.s5.lambda1_L"] = lambda1_yamabe(g5).eigenvalue;
  t["num.s5.lambda1_P"] = lambda1_paneitz(g5).eigenvalue;
  t["num.s6.lambda1_P"] = lambda1_paneitz(g6).eigenvalue;
  put_report(t, "num.s4.dim4", verify_thm_dim4(g4));
  put_report(t, "num.s5.general", verify_thm_general(g5));
  put_report(t, "num.s4.corollary4", verify_corollary4(SpinModel::round_sphere(4, 1.0), g4));
  put_report(t, "num.s4r2.corollary4", verify_corollary4(SpinModel::round_sphere(4, 2.0), g4r2));
  put_report(t, "num.s5.corollary_n", verify_corollary_n(SpinModel::round_sphere(5, 1.0), g5));
  put_report(t, "num.t4.dim4", verify_thm_dim4(ConformalMetric::base(t4)));
  t["num.s4.yamabe"] = yamabe_invariant(g4).value;
}

}  // namespace

nlohmann::json closed_form_table() {
  nlohmann::json t = nlohmann::json::object();
  closed_forms(t);
  numeric(t);
  return t;
}

GoldenResult compare_golden(const nlohmann::json& golden, const nlohmann::json& computed, double rel_tol,
                            double zero_floor) {
  GoldenResult res;
  auto fmt = [](double v) {
    std::ostringstream o;
    o.precision(17);
    o << v;
    return o.str();
  };
  for (const auto& [name, val] : golden.items()) {
    if (!val.is_number()) {
      res.mismatches.push_back(name + ": golden entry is not a number");
      continue;
    }
    if (!computed.contains(name)) {
      res.mismatches.push_back(name + ": not produced by the library");
      continue;
    }
    const double want = val.get<double>();
    const double got = computed[name].is_number() ? computed[name].get<double>() : std::nan("");
    ++res.compared;
    const double bound = want == 0.0 ? zero_floor : rel_tol * std::abs(want);
    if (!(std::abs(got - want) <= bound))
      res.mismatches.push_back(name + ": expected " + fmt(want) + ", got " + fmt(got));
  }
  for (const auto& [name, val] : computed.items())
    if (!golden.contains(name)) res.mismatches.push_back(name + ": missing from the golden file");
  res.pass = res.mismatches.empty();
  return res;
}

GoldenResult golden_check(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"golden file '" + path + "' not found"});
  nlohmann::json golden;
  try {
    in >> golden;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({"golden file '" + path + "' is not valid JSON: " + e.what()});
  }
  if (!golden.is_object()) throw ConfigError({"golden file '" + path + "' must hold a JSON object"});
  return compare_golden(golden, closed_form_table());
}

}  // namespace confspec::cli
