#include "confspec/cli/run.hpp"

#include <cctype>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <thread>

#include "confspec/errors.hpp"

namespace confspec::cli {

namespace {

constexpr const char* kVersion = "1.0.0";

const std::vector<std::string> kExperiments{"model-report", "verify", "sweep", "uniformize"};

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out, std::vector<std::string>& errs) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    errs.push_back(std::string("config field '") + key + "' has the wrong type");
  }
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

const std::vector<std::string>& known_theorems() {
  static const std::vector<std::string> k{"dim4",    "general",   "corollary4",        "corollary_n", "cgb",
                                          "yamabe_chain", "hijazi", "hijazi_functional", "friedrich",   "bar"};
  return k;
}

nlohmann::json RunConfig::echo() const {
  return {{"experiment", experiment},
          {"model", model},
          {"theorem", theorem},
          {"u", u},
          {"family", family},
          {"dirac_reference", dirac_reference},
          {"seed", seed},
          {"workers", workers},
          {"out", out},
          {"traces", traces},
          {"tolerances",
           {{"tol_rel", lab.tol.tol_rel},
            {"tol_abs", lab.tol.tol_abs},
            {"eq_tol", lab.tol.eq_tol},
            {"positivity", lab.tol.positivity}}},
          {"solver",
           {{"tol", lab.eigen.tol},
            {"max_iter", lab.eigen.max_iter},
            {"dense_threshold", lab.eigen.dense_threshold}}},
          {"yamabe",
           {{"step", lab.yamabe.step},
            {"tol", lab.yamabe.tol},
            {"window", lab.yamabe.window},
            {"max_iter", lab.yamabe.max_iter},
            {"restarts", lab.yamabe.restarts}}},
          {"uniformization_tol", lab.uniformization_tol}};
}

RunConfig config_from_json(const nlohmann::json& j) {
  std::vector<std::string> errs;
  RunConfig c;
  if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
  static const std::vector<std::string> top{"experiment", "model",  "theorem", "u",      "family", "dirac_reference",
                                            "seed",       "workers", "out",    "traces", "tolerances", "solver",
                                            "yamabe",     "uniformization_tol"};
  for (const auto& [k, v] : j.items())
    if (!contains(top, k)) errs.push_back("unknown config field '" + k + "'");
  read_field(j, "experiment", c.experiment, errs);
  read_field(j, "model", c.model, errs);
  read_field(j, "theorem", c.theorem, errs);
  read_field(j, "u", c.u, errs);
  read_field(j, "family", c.family, errs);
  read_field(j, "dirac_reference", c.dirac_reference, errs);
  read_field(j, "seed", c.seed, errs);
  read_field(j, "workers", c.workers, errs);
  read_field(j, "out", c.out, errs);
  read_field(j, "traces", c.traces, errs);
  read_field(j, "uniformization_tol", c.lab.uniformization_tol, errs);
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    read_field(t, "tol_rel", c.lab.tol.tol_rel, errs);
    read_field(t, "tol_abs", c.lab.tol.tol_abs, errs);
    read_field(t, "eq_tol", c.lab.tol.eq_tol, errs);
    read_field(t, "positivity", c.lab.tol.positivity, errs);
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    read_field(s, "tol", c.lab.eigen.tol, errs);
    read_field(s, "max_iter", c.lab.eigen.max_iter, errs);
    read_field(s, "dense_threshold", c.lab.eigen.dense_threshold, errs);
  }
  if (j.contains("yamabe")) {
    const auto& y = j["yamabe"];
    read_field(y, "step", c.lab.yamabe.step, errs);
    read_field(y, "tol", c.lab.yamabe.tol, errs);
    read_field(y, "window", c.lab.yamabe.window, errs);
    read_field(y, "max_iter", c.lab.yamabe.max_iter, errs);
    read_field(y, "restarts", c.lab.yamabe.restarts, errs);
  }
  if (!errs.empty()) throw ConfigError(errs);
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config file '" + path + "' cannot be read"});
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({"config file '" + path + "' is not valid JSON: " + e.what()});
  }
  return config_from_json(j);
}

std::vector<std::string> applicable_theorems(const ModelSpec& m) {
  if (m.is_mesh()) return {"bar"};
  std::vector<std::string> out{"friedrich"};
  if (m.n >= 3) {
    out.insert(out.end(), {"yamabe_chain", "hijazi", "hijazi_functional"});
  }
  if (m.n == 4) out.insert(out.end(), {"dim4", "corollary4", "cgb"});
  if (m.n >= 5) out.insert(out.end(), {"general", "corollary_n"});
  return out;
}

void validate(RunConfig& cfg) {
  std::vector<std::string> errs;
  auto absorb = [&](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      errs.insert(errs.end(), e.violations().begin(), e.violations().end());
    }
  };
  if (!contains(kExperiments, cfg.experiment))
    errs.push_back("experiment '" + cfg.experiment + "' is not one of model-report, verify, sweep, uniformize");
  if (cfg.model.empty())
    errs.push_back("a model is required");
  else
    absorb([&] { cfg.model_spec = parse_model(cfg.model); });
  if (cfg.experiment == "verify") absorb([&] { cfg.deformation = parse_deformation(cfg.u); });
  if (cfg.experiment == "sweep") {
    if (cfg.family.empty())
      errs.push_back("sweep needs a deformation family");
    else
      absorb([&] { cfg.family_spec = parse_family(cfg.family); });
  }
  if (cfg.workers < 1 || cfg.workers > 256) errs.push_back("workers must be in 1..256");
  if (!(cfg.lab.tol.tol_rel >= 0)) errs.push_back("tol_rel must be nonnegative");
  if (!(cfg.lab.tol.tol_abs >= 0)) errs.push_back("tol_abs must be nonnegative");
  if (!(cfg.lab.tol.eq_tol >= 0)) errs.push_back("eq_tol must be nonnegative");
  if (!(cfg.lab.eigen.tol > 0)) errs.push_back("solver tol must be positive");
  if (cfg.lab.eigen.max_iter < 1) errs.push_back("solver max_iter must be at least 1");
  if (cfg.lab.yamabe.max_iter < 1) errs.push_back("yamabe max_iter must be at least 1");
  if (cfg.lab.yamabe.restarts < 0) errs.push_back("yamabe restarts must be nonnegative");
  if (!contains({"auto", "area-matched", "none"}, cfg.dirac_reference))
    errs.push_back("dirac_reference must be auto, area-matched or none");
  if (cfg.out.empty()) errs.push_back("output directory must not be empty");

  cfg.theorems.clear();
  if (cfg.theorem != "all")
    for (const auto& t : split_theorems(cfg.theorem))
      if (!contains(known_theorems(), t)) errs.push_back("unknown theorem '" + t + "'");
  if (cfg.model_spec && (cfg.experiment == "verify" || cfg.experiment == "sweep")) {
    const auto fits = applicable_theorems(*cfg.model_spec);
    if (cfg.theorem == "all") {
      cfg.theorems = fits;
    } else {
      for (const auto& t : split_theorems(cfg.theorem)) {
        if (!contains(known_theorems(), t)) continue;
        if (!contains(fits, t))
          errs.push_back("theorem '" + t + "' does not apply to model '" + cfg.model + "'");
        else
          cfg.theorems.push_back(t);
      }
    }
  }
  if (cfg.experiment == "uniformize" && cfg.model_spec && !cfg.model_spec->is_mesh())
    errs.push_back("uniformize needs a mesh model");
  if (cfg.experiment == "sweep" && cfg.model_spec && cfg.model_spec->is_mesh())
    errs.push_back("sweep needs a sphere or torus model");
  if (!errs.empty()) throw ConfigError(errs);
}

std::vector<std::string> split_theorems(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  return out;
}

InequalityReport run_theorem(const std::string& theorem, const ModelSpec& model, const SpacePtr& space,
                             const ScalarField& u, const LabOptions& opts, const std::string& dirac_reference,
                             std::vector<TracePoint>* trace) {
  if (theorem == "bar") {
    std::optional<SpinModel> ref;
    const bool use = dirac_reference == "area-matched" || (dirac_reference == "auto" && model.kind == "icosphere");
    if (use) ref = area_matched_reference(*space);
    return verify_bar_2d(*space, ref, opts);
  }
  const ConformalMetric metric(space, u);
  const SpinModel spin = SpinModel::of(model.manifold());
  if (theorem == "dim4") return verify_thm_dim4(metric, opts);
  if (theorem == "general") return verify_thm_general(metric, opts);
  if (theorem == "corollary4") return verify_corollary4(spin, metric, opts);
  if (theorem == "corollary_n") return verify_corollary_n(spin, metric, opts);
  if (theorem == "cgb") return verify_chern_gauss_bonnet(metric, opts);
  if (theorem == "yamabe_chain") return verify_yamabe_chain(metric, spin, opts, trace);
  if (theorem == "hijazi") return verify_hijazi(spin, metric, opts);
  if (theorem == "hijazi_functional") return verify_hijazi_functional(metric, spin, opts);
  if (theorem == "friedrich") {
    if (metric.is_constant()) {
      SpinModel scaled = spin;
      const double c = u[0];
      scaled.lambda1_dirac *= std::exp(-c);
      InequalityReport r = friedrich_check(spin, opts.tol);
      // Homothety: both sides pick up exp(-2c).
      const double f = std::exp(-2.0 * c);
      r.lhs = *r.lhs * f;
      r.rhs *= f;
      settle(r, opts.tol);
      r.provenance["spin_model"] = to_json(scaled);
      r.provenance["u_constant"] = c;
      return r;
    }
    const int n = metric.dimension();
    InequalityReport r = friedrich_check(spin, opts.tol);
    r.rhs = n / (4.0 * (n - 1.0)) * scalar_curvature_of(metric).minCoeff();
    settle(r, opts.tol, true, true);
    r.notes.push_back("same-conformal-class probe: model lambda1(D) against inf R_u");
    return r;
  }
  throw ConfigError({"unknown theorem '" + theorem + "'"});
}

int exit_code_for(const std::vector<InequalityReport>& reports, bool solver_failure) {
  bool violated = false, inconclusive = solver_failure;
  for (const auto& r : reports) {
    violated = violated || r.status == ReportStatus::Violated;
    inconclusive = inconclusive || r.status == ReportStatus::Inconclusive;
  }
  if (violated) return kViolation;
  if (inconclusive) return kSolverFailure;
  return kOk;
}

nlohmann::json model_report(const ModelSpec& m, const LabOptions& opts) {
  nlohmann::json j;
  const ModelManifold man = m.manifold();
  j["model"] = man.describe();
  j["dimension"] = man.dimension();
  if (m.is_mesh()) {
    const auto space = build_trimesh(man);
    const ScalarField K = angle_defect_curvature(*space);
    const int chi = space->euler_characteristic();
    const double total = integrate(*space, K);
    j["vertices"] = space->node_count();
    j["triangles"] = man.mesh().triangles.size();
    j["euler_characteristic"] = chi;
    j["area"] = space->volume();
    j["gauss_bonnet"] = {{"total_curvature", total},
                         {"two_pi_chi", 2.0 * std::numbers::pi * chi},
                         {"defect", total - 2.0 * std::numbers::pi * chi}};
    return j;
  }
  const int n = man.dimension();
  const CurvatureData c = model_curvature(man);
  j["volume"] = man.volume();
  j["curvature"] = {{"scalar", c.scalar_R}, {"einstein_norm_sq", c.einstein_norm_sq}, {"weyl_norm_sq", c.weyl_norm_sq}};
  if (c.ricci_coeff) j["curvature"]["ricci_coefficient"] = *c.ricci_coeff;
  if (c.schouten_norm_sq) j["curvature"]["schouten_norm_sq"] = *c.schouten_norm_sq;
  if (c.q_value) j["curvature"]["q"] = *c.q_value;
  const SpinModel spin = SpinModel::of(man);
  j["dirac"] = to_json(spin);

  nlohmann::json closed;
  if (n >= 3) {
    closed["lambda1_L"] = c.scalar_R;
    closed["yamabe_invariant"] = c.scalar_R * std::pow(man.volume(), 2.0 / n);
  }
  if (n >= 4 && c.q_value) {
    closed["lambda1_P"] = 0.5 * (n - 4.0) * *c.q_value;
    closed["total_q"] = *c.q_value * man.volume();
    j["paneitz"] = {{"alpha", paneitz_alpha(n)}, {"beta", paneitz_beta(n)}};
  }
  j["closed_form"] = closed;

  const SpacePtr space = m.build();
  nlohmann::json num{{"backend", to_string(space->backend())}, {"node_count", space->node_count()}};
  if (n >= 3) {
    const ConformalMetric g = ConformalMetric::base(space);
    const SpectralResult L = lambda1_yamabe(g, opts.eigen);
    num["lambda1_L"] = L.eigenvalue;
    num["lambda1_L_residual"] = L.residual;
    if (n >= 4) {
      const SpectralResult P = lambda1_paneitz(g, opts.eigen);
      num["lambda1_P"] = P.eigenvalue;
      num["lambda1_P_zonal_upper_bound"] = P.zonal_upper_bound;
      num["total_q"] = total_q_curvature(g);
    }
  }
  if (space->backend() == Backend::ZonalSphere) num["table_cache_version"] = table_cache::kVersion;
  j["numeric"] = num;
  return j;
}

RunArtifact compute(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunArtifact art;
  nlohmann::json& doc = art.document;
  doc["tool"] = "confspec";
  doc["version"] = kVersion;
  doc["config"] = cfg.echo();
  doc["dirac_registry"] = registry_json();
  doc["tables"] = {{"cache_version", table_cache::kVersion}, {"cache_dir", table_cache::default_directory()}};
  const ModelSpec& model = *cfg.model_spec;

  if (cfg.experiment == "model-report") {
    doc["model_report"] = model_report(model, cfg.lab);
  } else {
    const SpacePtr space = model.build();
    std::vector<std::pair<std::string, ScalarField>> fields;
    std::vector<std::string> theorems = cfg.theorems;
    if (cfg.experiment == "verify") {
      fields.emplace_back(cfg.deformation->text, cfg.deformation->sample(*space));
    } else if (cfg.experiment == "sweep") {
      fields = cfg.family_spec->expand(*space, cfg.seed);
    } else {
      fields.emplace_back("const:0", space->constant(0.0));
      theorems = {"bar"};
      const UniformizationResult uni = uniformize_2d(*space, angle_defect_curvature(*space));
      doc["uniformization"] = {{"mean_curvature", uni.mean_curvature},
                               {"residual", uni.residual},
                               {"iterations", uni.iterations},
                               {"u0", std::vector<double>(uni.u0.data(), uni.u0.data() + uni.u0.size())}};
    }

    struct Job {
      std::string theorem;
      std::size_t field;
    };
    std::vector<Job> jobs;
    for (std::size_t f = 0; f < fields.size(); ++f)
      for (const auto& t : theorems) jobs.push_back({t, f});
    art.cases.resize(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    std::vector<char> solver_failed(jobs.size(), 0);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        CaseResult& c = art.cases[i];
        c.case_id = std::to_string(i);
        c.deformation = fields[jobs[i].field].first;
        try {
          c.report = run_theorem(jobs[i].theorem, model, space, fields[jobs[i].field].second, cfg.lab,
                                 cfg.dirac_reference, cfg.traces ? &c.trace : nullptr);
        } catch (const ConvergenceError& e) {
          c.report.theorem = jobs[i].theorem;
          c.report.status = ReportStatus::Inconclusive;
          c.report.notes.push_back(e.what());
          solver_failed[i] = 1;
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    const int nworkers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < nworkers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);

    std::vector<InequalityReport> reports;
    doc["cases"] = nlohmann::json::array();
    bool any_solver_failure = false;
    for (std::size_t i = 0; i < art.cases.size(); ++i) {
      const CaseResult& c = art.cases[i];
      reports.push_back(c.report);
      any_solver_failure = any_solver_failure || solver_failed[i];
      doc["cases"].push_back({{"case", c.case_id}, {"deformation", c.deformation}, {"report", to_json(c.report)}});
    }
    art.exit_code = exit_code_for(reports, any_solver_failure);
  }
  doc["exit_status"] = art.exit_code;
  doc["timing"] = {
      {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  return art;
}

void write_outputs(const RunConfig& cfg, const RunArtifact& art) {
  namespace fs = std::filesystem;
  const fs::path out(cfg.out);
  fs::create_directories(out);
  {
    std::ofstream f(out / "run.json");
    f << art.document.dump(2) << '\n';
  }
  {
    std::ofstream f(out / "summary.csv");
    f << csv_header() << '\n';
    for (const auto& c : art.cases) f << csv_row(c.report, c.case_id) << '\n';
  }
  if (art.document.contains("uniformization")) {
    std::ofstream f(out / "u0.csv");
    f << "vertex,u0\n";
    f.precision(17);
    const auto& u0 = art.document["uniformization"]["u0"];
    for (std::size_t i = 0; i < u0.size(); ++i) f << i << ',' << u0[i].get<double>() << '\n';
  }
  if (cfg.traces) {
    fs::create_directories(out / "traces");
    for (const auto& c : art.cases) {
      if (c.trace.empty()) continue;
      std::ofstream f(out / "traces" / ("case_" + c.case_id + "_yamabe.csv"));
      write_trace_csv(f, c.trace);
    }
  }
}

RunArtifact run(const RunConfig& cfg) {
  RunArtifact art = compute(cfg);
  write_outputs(cfg, art);
  return art;
}

}  // namespace confspec::cli
