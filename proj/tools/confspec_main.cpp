#include <CLI11.hpp>
#include <iostream>

#include "confspec/cli/golden.hpp"
#include "confspec/cli/run.hpp"
#include "confspec/errors.hpp"

using namespace confspec;

namespace {

struct Flags {
  std::string config, model, theorem, u, family, out, dirac_reference;
  std::uint64_t seed = 0;
  int workers = 1;
  double tol_rel = 0.0;
  bool traces = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--model", f.model, "model, e.g. sphere:n=4,r=1,N=64");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--workers", f.workers, "concurrent cases");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--tol-rel", f.tol_rel, "relative tolerance for holds");
}

void print_summary(const cli::RunArtifact& art) {
  for (const auto& c : art.cases) {
    const auto& r = c.report;
    std::cout << c.case_id << "  " << r.theorem << "  " << c.deformation << "  lhs=";
    if (r.lhs)
      std::cout << *r.lhs;
    else
      std::cout << "n/a";
    std::cout << "  rhs=" << r.rhs << "  " << to_string(r.status) << '\n';
  }
}

int execute(const std::string& experiment, CLI::App* sub, const Flags& f) {
  cli::RunConfig cfg;
  if (!f.config.empty()) cfg = cli::load_config_file(f.config);
  cfg.experiment = experiment;
  auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--model")) cfg.model = f.model;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--workers")) cfg.workers = f.workers;
  if (given("--out")) cfg.out = f.out;
  if (given("--tol-rel")) cfg.lab.tol.tol_rel = f.tol_rel;
  if (given("--theorem")) cfg.theorem = f.theorem;
  if (given("--u")) cfg.u = f.u;
  if (given("--family")) cfg.family = f.family;
  if (given("--traces")) cfg.traces = f.traces;
  if (given("--dirac-reference")) cfg.dirac_reference = f.dirac_reference;
  cfg.lab.eigen.seed = cfg.seed;
  cfg.lab.yamabe.seed = cfg.seed;
  cli::validate(cfg);
  const cli::RunArtifact art = cli::run(cfg);
  if (experiment == "model-report")
    std::cout << art.document["model_report"].dump(2) << '\n';
  else
    print_summary(art);
  std::cout << "exit " << art.exit_code << "  (" << cfg.out << "/run.json)\n";
  return art.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral checks of conformally covariant operators on model manifolds"};
  app.require_subcommand(1);
  Flags f;
  std::string golden = cli::default_golden_path();

  auto* report = app.add_subcommand("model-report", "closed-form and numeric data of a model");
  add_common(report, f);
  auto* verify = app.add_subcommand("verify", "one deformation, one or more theorems");
  add_common(verify, f);
  auto* sweep = app.add_subcommand("sweep", "a deformation family");
  add_common(sweep, f);
  auto* uniformize = app.add_subcommand("uniformize", "constant-curvature conformal factor on a mesh");
  add_common(uniformize, f);
  for (auto* sub : {verify, sweep}) {
    sub->add_option("--theorem", f.theorem, "theorem name, comma list, or all");
    sub->add_flag("--traces", f.traces, "write descent trace CSVs");
  }
  verify->add_option("--u", f.u, "deformation: const:c | cos:amp=A,mode=M | file:PATH");
  sweep->add_option("--family", f.family, "family: cos:modes=1..3,amp=0..0.5:11 | random:count=50");
  for (auto* sub : {verify, uniformize})
    sub->add_option("--dirac-reference", f.dirac_reference, "mesh Dirac data: auto | area-matched | none");
  auto* gold = app.add_subcommand("golden-check", "recompute the closed-form table and diff the golden file");
  gold->add_option("--golden", golden, "golden file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigError;
  }

  try {
    if (*gold) {
      const cli::GoldenResult r = cli::golden_check(golden);
      for (const auto& m : r.mismatches) std::cout << "MISMATCH " << m << '\n';
      std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.compared << " entries compared\n";
      return r.pass ? cli::kOk : cli::kViolation;
    }
    for (auto* sub : {report, verify, sweep, uniformize})
      if (*sub) return execute(sub->get_name(), sub, f);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return cli::kConfigError;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return cli::kSolverFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kConfigError;
  }
  return cli::kConfigError;
}
