#include "confspec/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "confspec/errors.hpp"

namespace confspec {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::ZonalSphere: return "zonal-sphere";
    case Backend::TorusGrid: return "torus-grid";
    case Backend::TriMesh: return "trimesh";
  }
  return "unknown";
}

ScalarField DiscreteSpace::apply_spectral_function(const ScalarField&,
                                                   const std::function<double(double)>&) const {
  throw UnsupportedInput("spectral calculus is not available on backend " + to_string(backend()));
}

Eigen::VectorXd DiscreteSpace::laplacian_spectrum() const {
  throw UnsupportedInput("closed-form spectrum is not available on backend " + to_string(backend()));
}

ScalarField DiscreteSpace::sample(const std::function<double(const Eigen::VectorXd&)>& fn) const {
  ScalarField f(node_count());
  for (Eigen::Index i = 0; i < node_count(); ++i) f[i] = fn(node_coordinates(i));
  return f;
}

void DiscreteSpace::check_field(const ScalarField& f) const {
  if (f.size() != node_count())
    throw ShapeMismatch("field has " + std::to_string(f.size()) + " samples, space has " +
                        std::to_string(node_count()) + " nodes");
}

double integrate(const DiscreteSpace& space, const ScalarField& f) {
  space.check_field(f);
  return space.quad_weights().dot(f);
}

double inner(const DiscreteSpace& space, const ScalarField& f, const ScalarField& g) {
  space.check_field(f);
  space.check_field(g);
  return (space.quad_weights().array() * f.array() * g.array()).sum();
}

// ---------------------------------------------------------------------------
// Zonal sphere

ZonalSphereSpace::Tables gegenbauer_tables(int n, int node_count) {
  const int N = node_count;
  const double alpha = 0.5 * (n - 2);
  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 1.5);

  // Off-diagonal of the Jacobi matrix of the orthonormal family, b[k] for k >= 1.
  std::vector<double> b(N + 1, 0.0);
  for (int k = 1; k <= N; ++k) {
    const double num = k * (k + 2.0 * alpha);
    const double den = (2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0);
    b[k] = std::sqrt(num / den);
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd sub(N - 1);
  for (int k = 1; k < N; ++k) sub[k - 1] = b[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> x(tri.eigenvalues().data(), tri.eigenvalues().data() + N);

  // Orthonormal values p_0..p_{upto} at t, plus derivative of p_upto.
  auto evaluate = [&](double t, int upto, std::vector<double>* values, double* deriv) {
    double pm1 = 0.0, p = 1.0 / std::sqrt(mu0);
    double dpm1 = 0.0, dp = 0.0;
    if (values) (*values)[0] = p;
    for (int k = 0; k < upto; ++k) {
      const double pk1 = (t * p - b[k] * pm1) / b[k + 1];
      const double dpk1 = (p + t * dp - b[k] * dpm1) / b[k + 1];
      pm1 = p;
      p = pk1;
      dpm1 = dp;
      dp = dpk1;
      if (values && k + 1 < static_cast<int>(values->size())) (*values)[k + 1] = p;
    }
    if (deriv) *deriv = dp;
    return p;
  };

  for (double& xi : x) {
    for (int it = 0; it < 4; ++it) {
      double d = 0.0;
      const double p = evaluate(xi, N, nullptr, &d);
      if (d == 0.0) break;
      const double step = p / d;
      xi -= step;
      if (std::abs(step) < 1e-17) break;
    }
  }
  std::sort(x.begin(), x.end());

  ZonalSphereSpace::Tables t;
  t.x = x;
  t.w.resize(N);
  t.synthesis.resize(N, N);
  std::vector<double> vals(N);
  for (int i = 0; i < N; ++i) {
    evaluate(x[i], N - 1, &vals, nullptr);
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
      t.synthesis(i, k) = vals[k];
      s += vals[k] * vals[k];
    }
    t.w[i] = 1.0 / s;
  }
  return t;
}

ZonalSphereSpace::ZonalSphereSpace(int n, double radius, Tables tables)
    : DiscreteSpace(Backend::ZonalSphere, n, ModelManifold::round_sphere(n, radius)), radius_(radius) {
  const int N = static_cast<int>(tables.x.size());
  // Orbit of a polar angle is an (n-1)-sphere; dv = |S^{n-1}| r^n (1-x^2)^{(n-2)/2} dx.
  const double scale = unit_sphere_volume(n - 1) * std::pow(radius, n);
  x_ = Eigen::Map<const Eigen::VectorXd>(tables.x.data(), N);
  theta_ = x_.array().acos();
  weights_ = Eigen::Map<const Eigen::VectorXd>(tables.w.data(), N) * scale;
  synthesis_ = tables.synthesis / std::sqrt(scale);
}

double ZonalSphereSpace::eigenvalue(int k) const {
  return k * (k + dimension() - 1.0) / (radius_ * radius_);
}

Eigen::VectorXd ZonalSphereSpace::analysis(const ScalarField& f) const {
  check_field(f);
  return synthesis_.transpose() * weights_.cwiseProduct(f);
}

ScalarField ZonalSphereSpace::apply_laplacian(const ScalarField& f) const {
  return apply_spectral_function(f, [](double lam) { return lam; });
}

// The weighted mean is the exact l = 0 component; transforming only f - mean
// keeps its rounding out of the high modes, which phi may amplify.
ScalarField ZonalSphereSpace::apply_spectral_function(const ScalarField& f,
                                                      const std::function<double(double)>& phi) const {
  check_field(f);
  const double mean = weights_.dot(f) / weights_.sum();
  Eigen::VectorXd c = analysis(f.array() - mean);
  c[0] = 0.0;
  for (Eigen::Index k = 1; k < c.size(); ++k) c[k] *= phi(eigenvalue(static_cast<int>(k)));
  return (synthesis_ * c).array() + phi(0.0) * mean;
}

Eigen::VectorXd ZonalSphereSpace::laplacian_spectrum() const {
  Eigen::VectorXd s(node_count());
  for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = eigenvalue(static_cast<int>(k));
  return s;
}

double ZonalSphereSpace::laplacian_norm_estimate() const {
  return eigenvalue(static_cast<int>(node_count()) - 1);
}

Eigen::VectorXd ZonalSphereSpace::node_coordinates(Eigen::Index i) const {
  return Eigen::VectorXd::Constant(1, theta_[i]);
}

std::shared_ptr<const ZonalSphereSpace> build_zonal_sphere(int n, double radius, int node_count) {
  if (n < 2) throw DimensionError("zonal sphere needs n >= 2");
  if (!(radius > 0.0)) throw InvalidModel("sphere radius must be positive");
  if (node_count < 16)
    throw ResolutionError("zonal sphere needs at least 16 nodes to resolve fourth-order operators, got " +
                          std::to_string(node_count));
  const std::string dir = table_cache::default_directory();
  std::optional<ZonalSphereSpace::Tables> tables;
  if (!dir.empty()) tables = table_cache::load(dir, n, node_count);
  if (!tables) {
    tables = gegenbauer_tables(n, node_count);
    if (!dir.empty()) table_cache::store(dir, n, node_count, *tables);
  }
  return std::make_shared<const ZonalSphereSpace>(n, radius, std::move(*tables));
}

// ---------------------------------------------------------------------------
// Torus grid

TorusGridSpace::TorusGridSpace(const ModelManifold& torus, int modes_per_axis)
    : DiscreteSpace(Backend::TorusGrid, torus.dimension(), torus), m_(modes_per_axis) {
  const int n = dimension();
  const auto& L = torus.torus().lengths;
  Eigen::Index total = 1;
  for (int a = 0; a < n; ++a) total *= m_;
  double cell = 1.0;
  for (int a = 0; a < n; ++a) cell *= L[a] / m_;
  weights_ = Eigen::VectorXd::Constant(total, cell);

  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd d2(m_, m_);
    const double base = 2.0 * std::numbers::pi / L[a];
    for (int j = 0; j < m_; ++j)
      for (int l = 0; l < m_; ++l) {
        double s = 0.0;
        for (int k = -m_ / 2 + 1; k <= m_ / 2; ++k)
          s += (base * k) * (base * k) * std::cos(2.0 * std::numbers::pi * k * (j - l) / m_);
        d2(j, l) = s / m_;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d2);
    second_diff_.push_back(d2);
    eigvec_.push_back(es.eigenvectors());
    // Exact symbols in the solver's ascending order; the solver only supplies the basis.
    std::vector<double> sym;
    for (int k = -m_ / 2 + 1; k <= m_ / 2; ++k) sym.push_back((base * k) * (base * k));
    std::sort(sym.begin(), sym.end());
    eigval_.push_back(Eigen::Map<Eigen::VectorXd>(sym.data(), m_));
  }

  mode_spectrum_ = Eigen::VectorXd::Zero(total);
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index rem = i;
    for (int a = 0; a < n; ++a) {
      mode_spectrum_[i] += eigval_[a][rem % m_];
      rem /= m_;
    }
  }
}

void TorusGridSpace::apply_axis(const Eigen::MatrixXd& mat, int axis, const Eigen::VectorXd& in,
                                Eigen::VectorXd& out) const {
  Eigen::Index stride = 1;
  for (int a = 0; a < axis; ++a) stride *= m_;
  const Eigen::Index block = stride * m_;
  const Eigen::Index outer = in.size() / block;
  Eigen::VectorXd fiber(m_), res(m_);
  for (Eigen::Index o = 0; o < outer; ++o)
    for (Eigen::Index s = 0; s < stride; ++s) {
      const Eigen::Index base = o * block + s;
      for (int j = 0; j < m_; ++j) fiber[j] = in[base + j * stride];
      res.noalias() = mat * fiber;
      for (int j = 0; j < m_; ++j) out[base + j * stride] = res[j];
    }
}

ScalarField TorusGridSpace::apply_laplacian(const ScalarField& f) const {
  check_field(f);
  ScalarField out = ScalarField::Zero(f.size());
  ScalarField tmp(f.size());
  for (int a = 0; a < dimension(); ++a) {
    apply_axis(second_diff_[a], a, f, tmp);
    out += tmp;
  }
  return out;
}

ScalarField TorusGridSpace::apply_spectral_function(const ScalarField& f,
                                                    const std::function<double(double)>& phi) const {
  check_field(f);
  const double mean = f.mean();  // uniform weights
  ScalarField c = f.array() - mean, tmp(f.size());
  for (int a = 0; a < dimension(); ++a) {
    apply_axis(eigvec_[a].transpose(), a, c, tmp);
    c.swap(tmp);
  }
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= phi(mode_spectrum_[i]);
  for (int a = 0; a < dimension(); ++a) {
    apply_axis(eigvec_[a], a, c, tmp);
    c.swap(tmp);
  }
  return c.array() + phi(0.0) * mean;
}

Eigen::VectorXd TorusGridSpace::laplacian_spectrum() const {
  Eigen::VectorXd s = mode_spectrum_;
  std::sort(s.data(), s.data() + s.size());
  return s;
}

double TorusGridSpace::laplacian_norm_estimate() const {
  double s = 0.0;
  for (const auto& lam : eigval_) s += lam.maxCoeff();
  return s;
}

Eigen::VectorXd TorusGridSpace::node_coordinates(Eigen::Index i) const {
  Eigen::VectorXd p(dimension());
  Eigen::Index rem = i;
  for (int a = 0; a < dimension(); ++a) {
    p[a] = static_cast<double>(rem % m_) * lengths()[a] / m_;
    rem /= m_;
  }
  return p;
}

ScalarField TorusGridSpace::fourier_mode(int axis, int k) const {
  const double L = lengths()[axis];
  return sample([&](const Eigen::VectorXd& p) { return std::cos(2.0 * std::numbers::pi * k * p[axis] / L); });
}

std::shared_ptr<const TorusGridSpace> build_torus(const std::vector<double>& lengths, int modes_per_axis,
                                                  TorusOptions opts) {
  auto model = ModelManifold::flat_torus(lengths);
  if (modes_per_axis < 8 || modes_per_axis % 2 != 0)
    throw ResolutionError("torus grid needs an even number of modes per axis, at least 8");
  double total = 1.0;
  for (std::size_t a = 0; a < lengths.size(); ++a) total *= modes_per_axis;
  if (total > static_cast<double>(opts.node_cap))
    throw ResolutionError("torus grid of " + std::to_string(static_cast<long long>(total)) +
                          " nodes exceeds the cap of " + std::to_string(opts.node_cap));
  return std::make_shared<const TorusGridSpace>(model, modes_per_axis);
}

}  // namespace confspec
