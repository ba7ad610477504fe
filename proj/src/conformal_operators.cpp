#include "confspec/conformal_operators.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <cmath>
#include <limits>
#include <numbers>

#include "confspec/errors.hpp"

namespace confspec {

namespace {

double symbol_sup(const DiscreteSpace& space, const std::function<double(double)>& phi) {
  const Eigen::VectorXd spec = space.laplacian_spectrum();
  double m = 0.0;
  for (Eigen::Index i = 0; i < spec.size(); ++i) m = std::max(m, std::abs(phi(spec[i])));
  return m;
}

void require_positive(const ScalarField& v, const char* what) {
  const double lo = v.minCoeff();
  if (!(lo > std::numeric_limits<double>::min()) || !v.allFinite())
    throw UnderflowError(std::string(what) + " left the floating-point range");
}

}  // namespace

double yamabe_coefficient(int n) { return 4.0 * (n - 1.0) / (n - 2.0); }

OperatorHandle spectral_operator(SpacePtr space, std::function<double(double)> phi, std::string descriptor,
                                 OperatorKind kind) {
  if (!space->has_spectral_calculus())
    throw UnsupportedInput("spectral operators need a backend with spectral calculus");
  OperatorHandle op;
  op.kind = kind;
  op.n = space->dimension();
  op.descriptor = std::move(descriptor);
  op.weights = space->quad_weights();
  op.symbol = phi;
  op.norm_estimate = symbol_sup(*space, phi);
  const DiscreteSpace* raw = space.get();
  op.apply = [raw, phi](const ScalarField& f) { return raw->apply_spectral_function(f, phi); };
  op.space = std::move(space);
  return op;
}

OperatorHandle laplacian_operator(SpacePtr space) {
  OperatorHandle op;
  op.kind = OperatorKind::Laplacian;
  op.n = space->dimension();
  op.descriptor = "Delta base n=" + std::to_string(op.n);
  op.weights = space->quad_weights();
  if (space->has_spectral_calculus()) op.symbol = [](double lam) { return lam; };
  op.norm_estimate = space->laplacian_norm_estimate();
  const DiscreteSpace* raw = space.get();
  op.apply = [raw](const ScalarField& f) { return raw->apply_laplacian(f); };
  op.space = std::move(space);
  return op;
}

OperatorHandle yamabe_base(SpacePtr space, const CurvatureData& curv) {
  const int n = space->dimension();
  if (n < 3) throw DimensionError("the Yamabe operator needs n >= 3; surfaces use the Gauss curvature equation");
  if (curv.n != n) throw DimensionError("curvature data dimension does not match the space");
  const double c = yamabe_coefficient(n), R = curv.scalar_R;
  OperatorHandle op;
  op.kind = OperatorKind::Yamabe;
  op.n = n;
  op.descriptor = "L base n=" + std::to_string(n);
  op.weights = space->quad_weights();
  op.norm_estimate = c * space->laplacian_norm_estimate() + std::abs(R);
  const DiscreteSpace* raw = space.get();
  op.apply = [raw, c, R](const ScalarField& f) -> ScalarField { return c * raw->apply_laplacian(f) + R * f; };
  if (space->has_spectral_calculus()) op.symbol = [c, R](double lam) { return c * lam + R; };
  op.space = std::move(space);
  return op;
}

OperatorHandle paneitz_base(SpacePtr space, const CurvatureData& curv) {
  const int n = space->dimension();
  if (n < 3) throw DimensionError("the Paneitz-Branson operator needs n >= 3");
  if (curv.n != n) throw DimensionError("curvature data dimension does not match the space");
  if (!curv.is_einstein()) throw UnsupportedInput("the Paneitz-Branson operator is assembled on Einstein bases only");
  const double R = curv.scalar_R;
  // delta((alpha R + beta Ric) d) = (alpha R + beta c) Delta with Ric = c g.
  const double b = paneitz_alpha(n) * R + paneitz_beta(n) * *curv.ricci_coeff;
  const double q = curv.q_value ? *curv.q_value : q_from_curvature(curv);
  const double zeroth = 0.5 * (n - 4.0) * q;
  OperatorHandle op;
  op.kind = OperatorKind::Paneitz;
  op.n = n;
  op.descriptor = "P base n=" + std::to_string(n);
  op.weights = space->quad_weights();
  const double lap = space->laplacian_norm_estimate();
  op.norm_estimate = lap * lap + std::abs(b) * lap + std::abs(zeroth);
  const DiscreteSpace* raw = space.get();
  op.apply = [raw, b, zeroth](const ScalarField& f) -> ScalarField {
    const ScalarField lf = raw->apply_laplacian(f);
    return raw->apply_laplacian(lf) + b * lf + zeroth * f;
  };
  if (space->has_spectral_calculus()) op.symbol = [b, zeroth](double lam) { return lam * lam + b * lam + zeroth; };
  op.space = std::move(space);
  return op;
}

// ---------------------------------------------------------------------------

ConformalMetric::ConformalMetric(SpacePtr space, ScalarField u) : space_(std::move(space)), u_(std::move(u)) {
  space_->check_field(u_);
  if (!u_.allFinite()) throw UnderflowError("conformal factor has non-finite samples");
  const double amp = u_.cwiseAbs().maxCoeff();
  if (amp > kMaxAmplitude)
    throw UnderflowError("conformal factor amplitude " + std::to_string(amp) + " exceeds the guard of 3");
  const int n = space_->dimension();
  volume_weights_ = space_->quad_weights().cwiseProduct((n * u_.array()).exp().matrix());
  if (space_->model().is_mesh()) {
    curvature_.n = 2;
    curvature_.scalar_R = std::numeric_limits<double>::quiet_NaN();
  } else {
    curvature_ = model_curvature(space_->model());
  }
}

ScalarField ConformalMetric::exp_u(double k) const { return (k * u_.array()).exp().matrix(); }

bool ConformalMetric::is_constant(double tol) const { return u_.maxCoeff() - u_.minCoeff() <= tol; }

TransformedProblem transformed_quadratic_forms(const ConformalMetric& metric, Which which) {
  const int n = metric.dimension();
  if (which == Which::L) {
    if (n < 3) throw DimensionError("transformed Yamabe problem needs n >= 3");
    return {yamabe_base(metric.space_ptr(), metric.base_curvature()),
            metric.space().quad_weights().cwiseProduct(metric.exp_u(2.0)), Which::L, 0.5 * (n - 2.0)};
  }
  if (n < 4) throw DimensionError("transformed Paneitz-Branson problem needs n >= 4");
  return {paneitz_base(metric.space_ptr(), metric.base_curvature()),
          metric.space().quad_weights().cwiseProduct(metric.exp_u(4.0)), Which::P, 0.5 * (n - 4.0)};
}

OperatorHandle conjugated_operator(const ConformalMetric& metric, Which which) {
  const int n = metric.dimension();
  OperatorHandle base = which == Which::L ? yamabe_base(metric.space_ptr(), metric.base_curvature())
                                          : paneitz_base(metric.space_ptr(), metric.base_curvature());
  const double a = which == Which::L ? 0.5 * (n - 2.0) : 0.5 * (n - 4.0);
  const double b = which == Which::L ? 0.5 * (n + 2.0) : 0.5 * (n + 4.0);
  const ScalarField ea = metric.exp_u(a), eb = metric.exp_u(-b);
  OperatorHandle op;
  op.kind = base.kind;
  op.n = n;
  op.transformed = true;
  op.descriptor = std::string(which == Which::L ? "L" : "P") + " transformed n=" + std::to_string(n);
  op.weights = metric.volume_weights();
  op.space = metric.space_ptr();
  op.norm_estimate = base.norm_estimate * ea.maxCoeff() * eb.maxCoeff();
  auto apply = base.apply;
  op.apply = [apply, ea, eb](const ScalarField& f) -> ScalarField {
    return eb.cwiseProduct(apply(ea.cwiseProduct(f)));
  };
  return op;
}

ScalarField scalar_curvature_of(const ConformalMetric& metric) {
  const int n = metric.dimension();
  if (n < 3) throw DimensionError("scalar_curvature_of needs n >= 3; use gauss_curvature_of on surfaces");
  const ScalarField h = metric.exp_u(0.5 * (n - 2.0));
  require_positive(h, "h = exp((n-2)u/2)");
  const OperatorHandle L = yamabe_base(metric.space_ptr(), metric.base_curvature());
  return metric.exp_u(-2.0).cwiseProduct(L(h).cwiseQuotient(h));
}

ScalarField q_curvature_of(const ConformalMetric& metric) {
  const int n = metric.dimension();
  if (n < 4) throw DimensionError("q_curvature_of needs n >= 4");
  const OperatorHandle P = paneitz_base(metric.space_ptr(), metric.base_curvature());
  const ScalarField e4 = metric.exp_u(-4.0);
  require_positive(e4, "exp(-4u)");
  if (n == 4) {
    const double q = *metric.base_curvature().q_value;
    return e4.cwiseProduct((P(metric.u()).array() + q).matrix());
  }
  const ScalarField w = metric.exp_u(0.5 * (n - 4.0));
  require_positive(w, "w = exp((n-4)u/2)");
  return (2.0 / (n - 4.0)) * e4.cwiseProduct(P(w).cwiseQuotient(w));
}

double total_q_curvature(const ConformalMetric& metric) {
  // Q_u dv_u integrated through the symmetric form of P: no large pointwise
  // values cancel in the sum.
  const int n = metric.dimension();
  if (n < 4) throw DimensionError("total_q_curvature needs n >= 4");
  const OperatorHandle P = paneitz_base(metric.space_ptr(), metric.base_curvature());
  const Eigen::VectorXd& dv = metric.space().quad_weights();
  if (n == 4) {
    // Constants are an exact eigenvector of any function of Delta.
    const ScalarField one = metric.space().constant(1.0);
    const ScalarField p1 = P.has_symbol() ? ScalarField(P.symbol(0.0) * one) : P(one);
    return *metric.base_curvature().q_value * dv.sum() + dv.dot(p1.cwiseProduct(metric.u()));
  }
  const ScalarField w = metric.exp_u(0.5 * (n - 4.0));
  return 2.0 / (n - 4.0) * dv.dot(w.cwiseProduct(P(w)));
}

ScalarField gauss_curvature_of(const DiscreteSpace& space, const ScalarField& base_K, const ScalarField& u) {
  space.check_field(base_K);
  space.check_field(u);
  const ScalarField e = (-2.0 * u.array()).exp().matrix();
  return e.cwiseProduct(space.apply_laplacian(u) + base_K);
}

double hijazi_functional(const ConformalMetric& metric) {
  const int n = metric.dimension();
  if (n < 3) throw DimensionError("hijazi_functional needs n >= 3");
  const ScalarField h = metric.exp_u(0.5 * (n - 2.0));
  require_positive(h, "h = exp((n-2)u/2)");
  const OperatorHandle L = yamabe_base(metric.space_ptr(), metric.base_curvature());
  return L(h).cwiseQuotient(h).minCoeff();
}

// ---------------------------------------------------------------------------

UniformizationResult uniformize_2d(const DiscreteSpace& space, const ScalarField& K, double tol, int max_iter) {
  const auto* mesh = dynamic_cast<const TriMeshSpace*>(&space);
  if (!mesh) throw UnsupportedInput("uniformize_2d needs the trimesh backend");
  space.check_field(K);
  const Eigen::VectorXd& w = space.quad_weights();
  const double area = w.sum();

  UniformizationResult res;
  res.mean_curvature = w.dot(K) / area;
  const ScalarField target = (res.mean_curvature - K.array()).matrix();
  const double target_norm = std::sqrt(w.dot(target.cwiseProduct(target)));
  if (target_norm <= 1e-14 * std::max(1.0, std::abs(res.mean_curvature))) {
    res.u0 = space.constant(0.0);
    return res;
  }

  // S u = M (Kbar - K); the right side is projected onto range(S) = 1^perp.
  Eigen::VectorXd rhs = w.cwiseProduct(target);
  rhs.array() -= rhs.mean();
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(max_iter);
  cg.compute(mesh->stiffness());
  Eigen::VectorXd u = cg.solve(rhs);
  res.iterations = static_cast<int>(cg.iterations());
  u.array() -= w.dot(u) / area;
  res.u0 = u;

  const ScalarField r = space.apply_laplacian(u) - target;
  res.residual = std::sqrt(w.dot(r.cwiseProduct(r))) / target_norm;
  if (cg.info() != Eigen::Success || !(res.residual <= 1e-8))
    throw ConvergenceError("uniformization Poisson solve did not converge", res.iterations, res.residual);
  return res;
}

ScalarField rescaled_mesh_curvature(const DiscreteSpace& space, const ScalarField& u) {
  const auto* mesh_space = dynamic_cast<const TriMeshSpace*>(&space);
  if (!mesh_space) throw UnsupportedInput("rescaled_mesh_curvature needs the trimesh backend");
  space.check_field(u);
  const auto& mesh = space.model().mesh();
  const Eigen::Index nv = space.node_count();
  Eigen::VectorXd angle = Eigen::VectorXd::Zero(nv), mass = Eigen::VectorXd::Zero(nv);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto p = mesh.corners(t);
    std::array<double, 3> len{};  // len[k] is opposite corner k
    for (int k = 0; k < 3; ++k) {
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      len[k] = (p[i] - p[j]).norm() * std::exp(0.5 * (u[tri[i]] + u[tri[j]]));
    }
    const double s = 0.5 * (len[0] + len[1] + len[2]);
    const double area = std::sqrt(std::max(0.0, s * (s - len[0]) * (s - len[1]) * (s - len[2])));
    for (int k = 0; k < 3; ++k) {
      const double a = len[k], b = len[(k + 1) % 3], c = len[(k + 2) % 3];
      const double cosine = std::clamp((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0);
      angle[tri[k]] += std::acos(cosine);
      mass[tri[k]] += area / 3.0;
    }
  }
  return (2.0 * std::numbers::pi - angle.array()).matrix().cwiseQuotient(mass);
}

}  // namespace confspec
