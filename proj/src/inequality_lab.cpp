#include "confspec/inequality_lab.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "confspec/errors.hpp"

namespace confspec {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json solver_json(const SpectralResult& s) {
  return {{"eigenvalue", s.eigenvalue},
          {"method", s.method},
          {"residual", s.residual},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"zonal_upper_bound", s.zonal_upper_bound}};
}

nlohmann::json metric_json(const ConformalMetric& m) {
  const auto& sp = m.space();
  const ScalarField& u = m.u();
  return {{"base", sp.model().describe()},
          {"backend", to_string(sp.backend())},
          {"node_count", sp.node_count()},
          {"u_min", u.minCoeff()},
          {"u_max", u.maxCoeff()},
          {"volume", m.volume()}};
}

Assumption dimension_assumption(int n, bool ok, const std::string& what) {
  return {"dimension " + what, ok, static_cast<double>(n), ""};
}

Assumption positivity(const std::string& name, double value, const Tolerances& tol) {
  return {name, value > tol.positivity, value, ""};
}

Assumption zonal_caveat(const SpectralResult& p) {
  Assumption a{"zonal_upper_bound", true, p.zonal_upper_bound ? 1.0 : 0.0, ""};
  if (p.zonal_upper_bound)
    a.note = "lambda1(P) is computed over zonal functions and bounds the full value from above";
  return a;
}

// lambda_1(D) of g_u when u is constant; otherwise the model value, flagged.
struct DiracValue {
  double value;
  bool exact;
};

DiracValue dirac_value(const SpinModel& spin, const ConformalMetric& metric) {
  const ModelManifold& base = metric.space().model();
  if (spin.dimension() != metric.dimension())
    throw ShapeMismatch("spin model and metric have different dimensions");
  const double vb = spin.base.volume(), vm = base.volume();
  if (std::abs(vb - vm) > 1e-12 * std::max(vb, vm))
    throw ShapeMismatch("spin model and metric live on different base manifolds");
  if (metric.is_constant()) return {spin.lambda1_dirac * std::exp(-metric.u()[0]), true};
  return {spin.lambda1_dirac, false};
}

double max_abs(const ScalarField& f) { return f.cwiseAbs().maxCoeff(); }

}  // namespace

InequalityReport verify_thm_dim4(const ConformalMetric& metric, const LabOptions& opts) {
  const int n = metric.dimension();
  if (n != 4) throw DimensionError("verify_thm_dim4 needs n = 4");
  InequalityReport r;
  r.theorem = "dim4";
  r.scale_exponent = -4;
  const SpectralResult L = lambda1_yamabe(metric, opts.eigen);
  const double totq = total_q_curvature(metric);
  r.lhs = L.eigenvalue * L.eigenvalue;
  r.rhs = 24.0 * totq / metric.volume();
  r.assumptions.push_back(dimension_assumption(n, true, "= 4"));
  settle(r, opts.tol, L.converged);
  r.provenance["metric"] = metric_json(metric);
  r.provenance["lambda1_L"] = solver_json(L);
  r.provenance["total_q"] = totq;
  return r;
}

InequalityReport verify_thm_general(const ConformalMetric& metric, const LabOptions& opts) {
  const int n = metric.dimension();
  if (n < 5) throw DimensionError("verify_thm_general needs n >= 5");
  InequalityReport r;
  r.theorem = "general";
  r.scale_exponent = -4;
  const SpectralResult L = lambda1_yamabe(metric, opts.eigen);
  const SpectralResult P = lambda1_paneitz(metric, opts.eigen);
  const double c = 16.0 * n * (n - 1.0) * (n - 1.0) / ((n * n - 4.0) * (n - 4.0));
  r.lhs = L.eigenvalue * L.eigenvalue;
  r.rhs = c * P.eigenvalue;
  r.assumptions.push_back(dimension_assumption(n, true, ">= 5"));
  r.assumptions.push_back(positivity("lambda1_P_positive", P.eigenvalue, opts.tol));
  r.assumptions.push_back(zonal_caveat(P));
  settle(r, opts.tol, L.converged && P.converged);
  r.provenance["metric"] = metric_json(metric);
  r.provenance["lambda1_L"] = solver_json(L);
  r.provenance["lambda1_P"] = solver_json(P);
  r.provenance["constant"] = c;
  return r;
}

namespace {

InequalityReport corollary_chain(const std::string& name, const SpinModel& spin, const ConformalMetric& metric,
                                 const LabOptions& opts) {
  const int n = metric.dimension();
  InequalityReport r;
  r.theorem = name;
  r.scale_exponent = -4;
  const DiracValue d = dirac_value(spin, metric);
  const SpectralResult L = lambda1_yamabe(metric, opts.eigen);
  const double a = n * n / (16.0 * (n - 1.0) * (n - 1.0));
  const double first = std::pow(d.value, 4);
  const double middle = a * L.eigenvalue * L.eigenvalue;
  double last = 0.0;
  bool solver_ok = L.converged;

  r.assumptions.push_back(positivity("lambda1_L_positive", L.eigenvalue, opts.tol));
  r.provenance["lambda1_L"] = solver_json(L);
  if (n == 4) {
    const double totq = total_q_curvature(metric);
    last = (8.0 / 3.0) * totq / metric.volume();
    r.provenance["total_q"] = totq;
  } else {
    const SpectralResult P = lambda1_paneitz(metric, opts.eigen);
    last = n * n * n / ((n * n - 4.0) * (n - 4.0)) * P.eigenvalue;
    solver_ok = solver_ok && P.converged;
    r.assumptions.push_back(positivity("lambda1_P_positive", P.eigenvalue, opts.tol));
    r.assumptions.push_back(zonal_caveat(P));
    r.provenance["lambda1_P"] = solver_json(P);
  }
  r.links.push_back(make_link("dirac_vs_yamabe", first, middle, opts.tol, !d.exact));
  r.links.push_back(make_link(n == 4 ? "yamabe_vs_total_q" : "yamabe_vs_paneitz", middle, last, opts.tol));
  settle_chain(r, opts.tol, solver_ok);
  if (!d.exact)
    r.notes.push_back("first link is a same-conformal-class probe: lambda1(D) is known only at the model metric");
  r.provenance["metric"] = metric_json(metric);
  r.provenance["spin_model"] = to_json(spin);
  r.provenance["lambda1_D"] = d.value;
  return r;
}

}  // namespace

InequalityReport verify_corollary4(const SpinModel& spin, const ConformalMetric& metric, const LabOptions& opts) {
  if (metric.dimension() != 4) throw DimensionError("verify_corollary4 needs n = 4");
  return corollary_chain("corollary4", spin, metric, opts);
}

InequalityReport verify_corollary_n(const SpinModel& spin, const ConformalMetric& metric, const LabOptions& opts) {
  if (metric.dimension() < 5) throw DimensionError("verify_corollary_n needs n >= 5");
  return corollary_chain("corollary_n", spin, metric, opts);
}

SpinModel area_matched_reference(const DiscreteSpace& space) {
  return SpinModel::round_sphere(2, std::sqrt(space.volume() / (4.0 * kPi)));
}

InequalityReport verify_bar_2d(const DiscreteSpace& space, const std::optional<SpinModel>& reference,
                               const LabOptions& opts) {
  const auto* mesh = dynamic_cast<const TriMeshSpace*>(&space);
  if (!mesh) throw UnsupportedInput("verify_bar_2d needs the trimesh backend");
  InequalityReport r;
  r.theorem = "bar_2d";
  r.scale_exponent = -2;
  const double area = space.volume();
  const int chi = mesh->euler_characteristic();
  r.rhs = 2.0 * kPi * chi / area;

  bool probe = false;
  if (reference) {
    if (reference->dimension() != 2) throw ShapeMismatch("the Dirac reference must be a surface");
    r.lhs = std::pow(dirac_lambda1(*reference), 2);
    const double ref_area = reference->base.volume();
    probe = std::abs(ref_area - area) > 1e-9 * area;
    r.provenance["reference"] = to_json(*reference);
    if (probe) r.notes.push_back("reference area differs from the mesh area; comparison is a probe");
  } else if (r.rhs <= 0.0) {
    r.lhs = 0.0;
  } else {
    r.assumptions.push_back({"dirac_reference_available", false, 0.0, "no closed-form Dirac data for this mesh"});
  }
  if (r.rhs <= 0.0) r.notes.push_back("right side is not positive; the inequality holds for every lambda1(D)");

  const ScalarField K = angle_defect_curvature(space);
  bool solver_ok = true;
  try {
    const UniformizationResult uni = uniformize_2d(space, K);
    const ScalarField lhs_const = space.apply_laplacian(uni.u0) + K;  // K_{u0} e^{2 u0}
    const double scale = std::max(std::abs(r.rhs), 1e-300);
    const double spread = max_abs((lhs_const.array() - r.rhs).matrix()) / scale;
    const ScalarField resc = rescaled_mesh_curvature(space, uni.u0);
    const ScalarField resc_const = resc.cwiseProduct((2.0 * uni.u0.array()).exp().matrix());
    const double resc_spread = max_abs((resc_const.array() - r.rhs).matrix()) / scale;
    r.links.push_back(make_link("uniformization_spread_within_tolerance", opts.uniformization_tol, spread, opts.tol));
    r.provenance["uniformization"] = {{"residual", uni.residual},
                                      {"iterations", uni.iterations},
                                      {"mean_curvature", uni.mean_curvature},
                                      {"spread", spread},
                                      {"rescaled_mesh_spread", resc_spread},
                                      {"min_functional", lhs_const.minCoeff()}};
  } catch (const ConvergenceError& e) {
    solver_ok = false;
    r.notes.push_back(e.what());
  }

  settle(r, opts.tol, solver_ok, probe);
  if (!r.links.empty() && !r.links.back().holds && r.status != ReportStatus::Inapplicable) {
    r.holds = false;
    r.equality = false;
    r.status = ReportStatus::Violated;
  }
  r.provenance["area"] = area;
  r.provenance["euler_characteristic"] = chi;
  r.provenance["vertices"] = space.node_count();
  return r;
}

InequalityReport verify_yamabe_chain(const ConformalMetric& metric, const std::optional<SpinModel>& spin,
                                     const LabOptions& opts, std::vector<TracePoint>* trace) {
  const int n = metric.dimension();
  if (n < 3) throw DimensionError("verify_yamabe_chain needs n >= 3");
  InequalityReport r;
  r.theorem = "yamabe_chain";
  r.scale_exponent = 0;
  const SpectralResult L = lambda1_yamabe(metric, opts.eigen);
  const YamabeEstimate Y = yamabe_invariant(metric, opts.yamabe);
  if (trace) *trace = Y.trace;
  const double vol_factor = std::pow(metric.volume(), 2.0 / n);
  const double holder_lhs = L.eigenvalue * vol_factor;
  r.assumptions.push_back(dimension_assumption(n, true, ">= 3"));

  if (spin) {
    const double c = n / (4.0 * (n - 1.0));
    const DiracValue d = dirac_value(*spin, metric);
    r.links.push_back(make_link("dirac_vs_yamabe", d.value * d.value * vol_factor, c * holder_lhs, opts.tol, !d.exact));
    r.links.push_back(make_link("holder", c * holder_lhs, c * Y.value, opts.tol));
    r.provenance["spin_model"] = to_json(*spin);
    r.provenance["lambda1_D"] = d.value;
    if (!d.exact) r.notes.push_back("Dirac link is a same-conformal-class probe");
  } else {
    r.links.push_back(make_link("holder", holder_lhs, Y.value, opts.tol));
  }
  settle_chain(r, opts.tol, L.converged && Y.converged);
  r.provenance["metric"] = metric_json(metric);
  r.provenance["lambda1_L"] = solver_json(L);
  r.provenance["yamabe"] = {{"estimate", Y.value},
                            {"iterations", Y.iterations},
                            {"converged", Y.converged},
                            {"start_values", Y.start_values}};
  return r;
}

InequalityReport verify_hijazi(const SpinModel& spin, const ConformalMetric& metric, const LabOptions& opts) {
  const SpectralResult L = lambda1_yamabe(metric, opts.eigen);
  const DiracValue d = dirac_value(spin, metric);
  SpinModel at_metric = spin;
  at_metric.lambda1_dirac = d.value;
  InequalityReport r = hijazi_check(at_metric, L.eigenvalue, opts.tol, !d.exact);
  if (!L.converged) r.status = ReportStatus::Inconclusive;
  r.provenance["metric"] = metric_json(metric);
  r.provenance["lambda1_L_solver"] = solver_json(L);
  return r;
}

InequalityReport verify_hijazi_functional(const ConformalMetric& metric, const std::optional<SpinModel>& spin,
                                          const LabOptions& opts) {
  const int n = metric.dimension();
  if (n < 3) throw DimensionError("verify_hijazi_functional needs n >= 3");
  InequalityReport r;
  r.theorem = "hijazi_functional";
  r.scale_exponent = 0;
  const double c = n / (4.0 * (n - 1.0));
  const ConformalMetric base = ConformalMetric::base(metric.space_ptr());
  const SpectralResult L = lambda1_yamabe(base, opts.eigen);
  const double f = hijazi_functional(metric);
  if (spin) {
    const DiracValue d = dirac_value(*spin, base);
    r.links.push_back(make_link("dirac_vs_yamabe", d.value * d.value, c * L.eigenvalue, opts.tol));
    r.provenance["spin_model"] = to_json(*spin);
  }
  r.links.push_back(make_link("yamabe_vs_functional", c * L.eigenvalue, c * f, opts.tol));
  settle_chain(r, opts.tol, L.converged);
  r.notes.push_back("u is a trial weight on the base metric; the functional is a lower bound on its sup over u");
  r.provenance["metric"] = metric_json(metric);
  r.provenance["lambda1_L"] = solver_json(L);
  r.provenance["functional"] = f;
  return r;
}

InequalityReport verify_chern_gauss_bonnet(const ConformalMetric& metric, const LabOptions& opts) {
  const int n = metric.dimension();
  if (n != 4) throw DimensionError("verify_chern_gauss_bonnet needs n = 4");
  const ModelManifold& base = metric.space().model();
  InequalityReport r;
  r.theorem = "chern_gauss_bonnet";
  r.scale_exponent = 0;
  const int chi = base.is_sphere() ? 2 : 0;
  const double weyl = metric.base_curvature().weyl_norm_sq;
  const double totq = total_q_curvature(metric);
  r.lhs = 2.0 * totq + 0.5 * weyl * base.volume();
  r.rhs = 16.0 * kPi * kPi * chi;
  r.assumptions.push_back(dimension_assumption(n, true, "= 4"));
  settle(r, opts.tol);
  r.provenance["metric"] = metric_json(metric);
  r.provenance["euler_characteristic"] = chi;
  r.provenance["total_q"] = totq;
  return r;
}

ScalarField cosine_deformation(const DiscreteSpace& space, double amplitude, int mode) {
  if (const auto* z = dynamic_cast<const ZonalSphereSpace*>(&space)) {
    const Eigen::VectorXd& th = z->angles();
    return (amplitude * (mode * th.array()).cos()).matrix();
  }
  if (const auto* t = dynamic_cast<const TorusGridSpace*>(&space)) {
    const double len = t->lengths()[0];
    return space.sample([&](const Eigen::VectorXd& x) { return amplitude * std::cos(2.0 * kPi * mode * x[0] / len); });
  }
  throw UnsupportedInput("cosine deformations are defined on zonal spheres and tori");
}

std::vector<ScalarField> random_deformations(const DiscreteSpace& space, int count, std::uint64_t seed,
                                             double max_amplitude, int max_mode) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  const auto* torus = dynamic_cast<const TorusGridSpace*>(&space);
  const auto* sphere = dynamic_cast<const ZonalSphereSpace*>(&space);
  if (!torus && !sphere) throw UnsupportedInput("random deformations are defined on zonal spheres and tori");

  std::vector<ScalarField> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double shift = unit(rng);
    ScalarField u = space.constant(0.0);
    for (int m = 1; m <= max_mode; ++m) {
      const double a = unit(rng);
      if (sphere) {
        u += a * (m * sphere->angles().array()).cos().matrix();
      } else {
        const int axis = static_cast<int>(rng() % static_cast<std::uint64_t>(space.dimension()));
        const double len = torus->lengths()[axis];
        const double ph = phase(rng);
        u += space.sample([&](const Eigen::VectorXd& x) { return a * std::cos(2.0 * kPi * m * x[axis] / len + ph); });
      }
    }
    const double mean = integrate(space, u) / space.volume();
    u.array() -= mean;
    const double amp = max_abs(u);
    const double target = max_amplitude * std::abs(unit(rng));
    if (amp > 0.0) u *= target / amp;
    u.array() += shift;
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace confspec
