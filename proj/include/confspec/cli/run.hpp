#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "confspec/cli/grammar.hpp"
#include "confspec/inequality_lab.hpp"

namespace confspec::cli {

enum ExitCode { kOk = 0, kViolation = 1, kSolverFailure = 2, kConfigError = 3 };

struct RunConfig {
  std::string experiment;  // model-report | verify | sweep | uniformize
  std::string model;
  std::string theorem = "all";
  std::string u = "const:0";
  std::string family;
  std::string dirac_reference = "auto";  // auto | area-matched | none (meshes)
  LabOptions lab;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = ".";
  bool traces = false;

  // Filled by validate().
  std::optional<ModelSpec> model_spec;
  std::optional<DeformationSpec> deformation;
  std::optional<FamilySpec> family_spec;
  std::vector<std::string> theorems;

  nlohmann::json echo() const;
};

// Reads every known field; unknown fields and type errors are violations.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

// Parses the model, deformation and family strings and checks that the
// requested theorems fit the model. Throws one ConfigError with every problem.
void validate(RunConfig& cfg);

// Theorems that apply to a model: dim4, general, corollary4, corollary_n,
// cgb, yamabe_chain, hijazi, hijazi_functional, friedrich on spheres/tori; bar on meshes.
std::vector<std::string> applicable_theorems(const ModelSpec& m);
const std::vector<std::string>& known_theorems();
// "dim4,cgb" -> {"dim4", "cgb"}.
std::vector<std::string> split_theorems(const std::string& s);

struct CaseResult {
  std::string case_id;
  std::string deformation;
  InequalityReport report;
  std::vector<TracePoint> trace;
};

InequalityReport run_theorem(const std::string& theorem, const ModelSpec& model, const SpacePtr& space,
                             const ScalarField& u, const LabOptions& opts, const std::string& dirac_reference = "auto",
                             std::vector<TracePoint>* trace = nullptr);

struct RunArtifact {
  nlohmann::json document;
  std::vector<CaseResult> cases;
  int exit_code = kOk;
};

// Violation outranks solver failure; both outrank success.
int exit_code_for(const std::vector<InequalityReport>& reports, bool solver_failure = false);

// Executes a validated config and writes run.json, summary.csv and optional
// traces under cfg.out.
RunArtifact run(const RunConfig& cfg);
RunArtifact compute(const RunConfig& cfg);
void write_outputs(const RunConfig& cfg, const RunArtifact& art);

nlohmann::json model_report(const ModelSpec& m, const LabOptions& opts);

}  // namespace confspec::cli
