// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "confspec/conformal_operators.hpp"
#include "confspec/dirac_analytic.hpp"
#include "confspec/discretization.hpp"
#include "confspec/eigensolve.hpp"
#include "confspec/inequality_lab.hpp"

using namespace confspec;

namespace {

constexpr double kPi = std::numbers::pi;

// Collects failed checks for one criterion.
struct Criterion {
  std::vector<std::string> failures;
  int checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  void rel(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want;
    expect(std::abs(got - want) <= tol * std::abs(want), s.str());
  }
};

void round_sphere_equality(Criterion& c) {
  const auto s4 = build_zonal_sphere(4, 1.0, 64);
  const ConformalMetric g4 = ConformalMetric::base(s4);
  c.rel(lambda1_yamabe(g4).eigenvalue, 12.0, 1e-9, "S4 lambda1(L)");
  c.rel(total_q_curvature(g4), 16 * kPi * kPi, 1e-9, "S4 total Q");
  const InequalityReport d4 = verify_thm_dim4(g4);
  c.rel(*d4.lhs, 144.0, 1e-9, "S4 dim4 lhs");
  c.rel(d4.rhs, 144.0, 1e-9, "S4 dim4 rhs");
  c.expect(d4.equality && d4.holds, "S4 dim4 equality");
  const InequalityReport c4 = verify_corollary4(SpinModel::round_sphere(4, 1.0), g4);
  c.expect(!c4.links.empty(), "corollary4 links");
  for (const auto& l : c4.links) {
    c.rel(l.lhs, 16.0, 1e-9, "corollary4 " + l.name + " lhs");
    c.rel(l.rhs, 16.0, 1e-9, "corollary4 " + l.name + " rhs");
  }
  c.expect(c4.equality, "corollary4 equality");

  const auto s5 = build_zonal_sphere(5, 1.0, 64);
  const ConformalMetric g5 = ConformalMetric::base(s5);
  c.rel(lambda1_yamabe(g5).eigenvalue, 20.0, 1e-9, "S5 lambda1(L)");
  c.rel(lambda1_paneitz(g5).eigenvalue, 105.0 / 16.0, 1e-9, "S5 lambda1(P)");
  const InequalityReport gen = verify_thm_general(g5);
  c.rel(*gen.lhs, 400.0, 1e-9, "S5 general lhs");
  c.rel(gen.rhs, 400.0, 1e-9, "S5 general rhs");
  c.expect(gen.equality && gen.holds, "S5 general equality");
  const InequalityReport cn = verify_corollary_n(SpinModel::round_sphere(5, 1.0), g5);
  c.expect(!cn.links.empty(), "corollary_n links");
  for (const auto& l : cn.links) {
    c.rel(l.lhs, 625.0 / 16.0, 1e-9, "corollary_n " + l.name + " lhs");
    c.rel(l.rhs, 625.0 / 16.0, 1e-9, "corollary_n " + l.name + " rhs");
  }
  c.expect(cn.equality, "corollary_n equality");
}

void chern_gauss_bonnet(Criterion& c) {
  const auto s4 = build_zonal_sphere(4, 1.0, 64);
  for (const ScalarField& u : random_deformations(*s4, 20, 2024)) {
    const InequalityReport r = verify_chern_gauss_bonnet(ConformalMetric(s4, u));
    c.rel(*r.lhs, 32 * kPi * kPi, 1e-8, "2 int Q_u dv_u");
    c.rel(r.rhs, 16 * kPi * kPi * 2, 1e-8, "16 pi^2 chi");
  }
}

void total_q_invariance(Criterion& c) {
  const auto s4 = build_zonal_sphere(4, 1.0, 64);
  const double target = 16 * kPi * kPi;
  for (const ScalarField& u : random_deformations(*s4, 100, 77, 0.5)) {
    const ConformalMetric m(s4, u);
    const ScalarField Q = q_curvature_of(m);
    const double pointwise = integrate(*s4, ScalarField(Q.array() * (4 * u.array()).exp()));
    c.expect(std::abs(pointwise - target) <= 1e-9 * target, "pointwise int Q_u dv_u");
    c.expect(std::abs(total_q_curvature(m) - target) <= 1e-9 * target, "total Q");
  }
}

void falsification(Criterion& c, int& applicable) {
  struct Base {
    const char* name;
    SpacePtr space;
  };
  const std::vector<Base> bases{{"S4", build_zonal_sphere(4, 1.0, 64)},
                                {"S5", build_zonal_sphere(5, 1.0, 64)},
                                {"S6", build_zonal_sphere(6, 1.0, 64)},
                                {"T4", build_torus(std::vector<double>(4, 1.0), 8)},
                                {"T5", build_torus(std::vector<double>(5, 1.0), 8)}};
  std::uint64_t seed = 500;
  for (const Base& b : bases) {
    for (const ScalarField& u : random_deformations(*b.space, 50, seed++)) {
      const ConformalMetric m(b.space, u);
      const InequalityReport r = b.space->dimension() == 4 ? verify_thm_dim4(m) : verify_thm_general(m);
      c.expect(!r.is_failure(), std::string(b.name) + " " + r.theorem + " " + to_string(r.status));
      if (r.assumptions_satisfied()) {
        ++applicable;
        c.expect(r.holds, std::string(b.name) + " " + r.theorem + " holds");
      }
    }
  }
}

void spectral_accuracy(Criterion& c) {
  for (int n : {2, 3, 4, 5, 6}) {
    const auto s = build_zonal_sphere(n, 1.0, 64);
    const Eigen::VectorXd ev = dense_generalized_spectrum(laplacian_operator(s), s->quad_weights());
    c.expect(std::abs(ev[0]) <= 1e-8, "zero mode n=" + std::to_string(n));
    for (int l = 1; l <= 16; ++l) c.rel(ev[l], l * (l + n - 1.0), 1e-8, "l(l+n-1) n=" + std::to_string(n));
  }

  std::vector<std::pair<std::string, TransformedProblem>> problems;
  const auto s4 = build_zonal_sphere(4, 1.0, 64);
  const auto s5 = build_zonal_sphere(5, 1.0, 64);
  const auto s6 = build_zonal_sphere(6, 1.0, 64);
  const auto t3 = build_torus({1.0, 1.3, 0.8}, 8);
  for (const auto& space : std::vector<SpacePtr>{s4, s5, s6, t3}) {
    const ScalarField u = random_deformations(*space, 1, 31)[0];
    problems.emplace_back("L", transformed_quadratic_forms(ConformalMetric(space, u), Which::L));
    if (space->dimension() >= 4) {
      problems.emplace_back("P", transformed_quadratic_forms(ConformalMetric(space, u), Which::P));
      problems.emplace_back("P base", transformed_quadratic_forms(ConformalMetric::base(space), Which::P));
    }
  }
  for (const auto& [name, p] : problems) {
    if (p.B.size() > 512) continue;
    const SpectralResult d = dense_smallest_eig(p.A, p.B);
    const SpectralResult it = lobpcg_smallest_eig(p.A, p.B, EigenOptions{1e-11, 2000, 1, 0});
    const double scale = std::abs(d.eigenvalue) + 1e-4 * p.A.norm_estimate * p.A.weights.cwiseQuotient(p.B).maxCoeff();
    c.expect(d.converged && it.converged, name + " converged");
    c.expect(std::abs(it.eigenvalue - d.eigenvalue) <= 1e-9 * scale, name + " dense vs iterative");
  }
}

void surface_pipeline(Criterion& c) {
  auto gauss_bonnet = [&](const TriMesh2D& mesh, const std::string& name) {
    const auto s = build_trimesh(ModelManifold::tri_mesh(mesh));
    const double total = integrate(*s, angle_defect_curvature(*s));
    c.expect(std::abs(total - 2 * kPi * mesh.euler_characteristic()) <= 1e-10, "Gauss-Bonnet " + name);
  };
  gauss_bonnet(meshes::icosphere(4), "icosphere");
  gauss_bonnet(meshes::torus_of_revolution(32, 16, 2.0, 0.7), "torus");
  gauss_bonnet(meshes::flat_torus(16, 16, 1.0, 1.0), "flat torus");
  gauss_bonnet(meshes::genus_two(), "genus 2");

  const auto ell = build_trimesh(ModelManifold::tri_mesh(meshes::ellipsoid(4, {1.0, 1.0, 1.5})));
  const ScalarField K = angle_defect_curvature(*ell);
  const UniformizationResult uni = uniformize_2d(*ell, K);
  const double target = 2 * kPi * ell->euler_characteristic() / ell->volume();
  // (1/2) R_{u0} e^{2 u0} = K_{u0} e^{2 u0}.
  const ScalarField k0 = gauss_curvature_of(*ell, K, uni.u0).array() * (2 * uni.u0).array().exp();
  c.expect((k0.array() - target).abs().maxCoeff() <= 1e-3 * target, "ellipsoid uniformized curvature");

  c.rel(std::pow(dirac_lambda1(SpinModel::round_sphere(2, 1.0)), 2), 2 * kPi * 2 / (4 * kPi), 1e-15, "S2 Bar");
  const auto ico = build_trimesh(ModelManifold::tri_mesh(meshes::icosphere(4)));
  const InequalityReport bar = verify_bar_2d(*ico, area_matched_reference(*ico));
  c.expect(bar.equality && bar.status == ReportStatus::Equality, "icosphere Bar equality");
}

void yamabe(Criterion& c) {
  const auto s4 = build_zonal_sphere(4, 1.0, 64);
  const double y4 = 12.0 * std::sqrt(8 * kPi * kPi / 3);
  // n(n-1) Vol^{2/n} = 61.56239.
  c.rel(y4, 61.5634, 2e-5, "closed form");

  YamabeOptions constant_only;
  constant_only.restarts = 0;
  constant_only.eigenfunction_start = false;
  const ConformalMetric base = ConformalMetric::base(s4);
  const YamabeEstimate e0 = yamabe_invariant(base, constant_only);
  c.rel(e0.value, y4, 1e-3, "constant start");
  c.expect(e0.value * std::sqrt(base.volume()) >= 0.0, "positive");
  c.expect(lambda1_yamabe(base).eigenvalue * std::sqrt(base.volume()) >= e0.value * (1 - 1e-9), "Holder link base");

  // Random starts: random positive fields and the constants of randomly deformed metrics.
  YamabeOptions random_only;
  random_only.eigenfunction_start = false;
  random_only.restarts = 3;
  for (const ScalarField& u : random_deformations(*s4, 4, 11)) {
    const ConformalMetric m(s4, u);
    for (std::uint64_t seed : {1u, 2u}) {
      random_only.seed = seed;
      const YamabeEstimate e = yamabe_invariant(m, random_only);
      c.rel(e.value, y4, 5e-3, "random start");
      c.expect(lambda1_yamabe(m).eigenvalue * std::sqrt(m.volume()) >= e.value * (1 - 1e-9), "Holder link");
      for (std::size_t i = 1; i < e.trace.size(); ++i)
        c.expect(e.trace[i].value <= e.trace[i - 1].value * (1 + 1e-12), "monotone descent");
    }
  }
}

void friedrich_hijazi(Criterion& c) {
  for (int n = 2; n <= 8; ++n) {
    const SpinModel m = SpinModel::round_sphere(n, 1.0);
    const double lhs = std::pow(dirac_lambda1(m), 2);
    const double rhs = n / (4.0 * (n - 1)) * n * (n - 1);
    c.expect(lhs == n * n / 4.0, "n^2/4 n=" + std::to_string(n));
    c.rel(rhs, n * n / 4.0, 1e-15, "n/(4(n-1)) n(n-1) n=" + std::to_string(n));
    c.expect(friedrich_check(m).equality, "Friedrich equality n=" + std::to_string(n));
    c.expect(hijazi_check(m, n * (n - 1.0)).equality, "Hijazi equality n=" + std::to_string(n));
  }
  const auto s4 = build_zonal_sphere(4, 1.0, 64);
  for (const ScalarField& u : random_deformations(*s4, 100, 88)) {
    const ConformalMetric m(s4, u);
    c.expect(hijazi_functional(m) <= lambda1_yamabe(ConformalMetric::base(s4)).eigenvalue + 1e-9,
             "hijazi functional");
  }
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    double budget_s;
    std::function<void(Criterion&)> body;
  };
  int applicable = 0;
  const std::vector<Entry> entries{
      {1, "round-sphere equality suite", 1.0, round_sphere_equality},
      {2, "Chern-Gauss-Bonnet on the S4 class", 5.0, chern_gauss_bonnet},
      {3, "total Q conformal invariance", 10.0, total_q_invariance},
      {4, "falsification harness", 120.0, [&](Criterion& c) { falsification(c, applicable); }},
      {5, "spectral discretization accuracy", 60.0, spectral_accuracy},
      {6, "surface pipeline", 30.0, surface_pipeline},
      {7, "Yamabe invariant", 60.0, yamabe},
      {8, "Friedrich and Hijazi model checks", 60.0, friedrich_hijazi},
  };

  int failed = 0;
  for (const Entry& e : entries) {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.body(c);
    } catch (const std::exception& ex) {
      c.failures.push_back(std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > e.budget_s) {
      std::ostringstream s;
      s << "time " << secs << " s exceeds " << e.budget_s << " s";
      c.failures.push_back(s.str());
    }
    const bool ok = c.failures.empty();
    std::printf("%s criterion %d: %s (%d checks, %.2f s)\n", ok ? "PASS" : "FAIL", e.id, e.title, c.checks, secs);
    if (e.id == 4) std::printf("    %d deformations passed the assumptions\n", applicable);
    for (std::size_t i = 0; i < c.failures.size() && i < 10; ++i) std::printf("    %s\n", c.failures[i].c_str());
    if (c.failures.size() > 10) std::printf("    ... %zu more\n", c.failures.size() - 10);
    failed += ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(entries.size()) - failed, entries.size());
  return failed == 0 ? 0 : 1;
}
