#include "confspec/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "confspec/errors.hpp"

namespace confspec {

namespace {

double bnorm(const Eigen::VectorXd& B, const ScalarField& v) {
  return std::sqrt((B.array() * v.array().square()).sum());
}

// Norm of B^{-1} K relative to B, with K = W A.
double relative_norm(const OperatorHandle& A, const Eigen::VectorXd& B) {
  return A.norm_estimate * A.weights.cwiseQuotient(B).maxCoeff();
}

void finalize(const OperatorHandle& A, const Eigen::VectorXd& B, SpectralResult& res) {
  ScalarField& v = res.eigenvector;
  v /= bnorm(B, v);
  if (A.weights.dot(v) < 0.0) v = -v;
  const ScalarField Av = A(v);
  res.eigenvalue = A.weights.dot(v.cwiseProduct(Av));
  res.residual = eigen_residual(A, B, v, res.eigenvalue);
}

// Approximate inverse of (K - sigma M) through the spectral calculus, with
// the shift sigma = -(1 + |min symbol|) keeping it positive definite.
std::function<ScalarField(const ScalarField&)> make_preconditioner(const OperatorHandle& A,
                                                                    const Eigen::VectorXd& B) {
  const Eigen::VectorXd W = A.weights;
  const double bbar = B.sum() / W.sum();
  if (A.has_symbol() && A.space && A.space->has_spectral_calculus()) {
    const Eigen::VectorXd spec = A.space->laplacian_spectrum();
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < spec.size(); ++i) lo = std::min(lo, A.symbol(spec[i]));
    const double shift = bbar * (1.0 + std::abs(lo));
    auto phi = A.symbol;
    const DiscreteSpace* space = A.space.get();
    return [=](const ScalarField& r) {
      return space->apply_spectral_function(r.cwiseQuotient(W), [&](double lam) { return 1.0 / (phi(lam) + shift); });
    };
  }
  const double scale = A.norm_estimate + bbar;
  return [=](const ScalarField& r) { return ScalarField(r.cwiseQuotient(W) / scale); };
}

}  // namespace

double eigen_residual(const OperatorHandle& A, const Eigen::VectorXd& B, const ScalarField& v, double lambda) {
  const ScalarField s = A.weights.cwiseProduct(A(v)).cwiseQuotient(B) - lambda * v;
  const double num = bnorm(B, s);
  const double den = (std::abs(lambda) + 1e-4 * relative_norm(A, B)) * bnorm(B, v);
  return den > 0.0 ? num / den : num;
}

Eigen::VectorXd dense_generalized_spectrum(const OperatorHandle& A, const Eigen::VectorXd& B) {
  const Eigen::Index n = B.size();
  Eigen::MatrixXd K(n, n);
  ScalarField e = ScalarField::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    K.col(j) = A.weights.cwiseProduct(A(e));
    e[j] = 0.0;
  }
  K = 0.5 * (K + K.transpose()).eval();
  const Eigen::MatrixXd M = B.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(K, M, Eigen::EigenvaluesOnly);
  return ges.eigenvalues();
}

SpectralResult dense_smallest_eig(const OperatorHandle& A, const Eigen::VectorXd& B, const EigenOptions& opts) {
  const Eigen::Index n = B.size();
  if (A.weights.size() != n) throw ShapeMismatch("operator and mass weights differ in size");
  Eigen::MatrixXd K(n, n);
  ScalarField e = ScalarField::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    K.col(j) = A.weights.cwiseProduct(A(e));
    e[j] = 0.0;
  }
  K = 0.5 * (K + K.transpose()).eval();
  const Eigen::MatrixXd M = B.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(K, M);
  SpectralResult res;
  res.method = "dense";
  res.iterations = 1;
  if (ges.info() != Eigen::Success) {
    res.converged = false;
    res.eigenvector = ScalarField::Zero(n);
    return res;
  }
  res.eigenvector = ges.eigenvectors().col(0);
  // Rayleigh quotient through the operator itself is far more accurate than
  // the factorized eigenvalue for fourth-order symbols.
  finalize(A, B, res);
  res.converged = res.residual <= opts.tol;
  res.trace.push_back({res.eigenvalue, res.residual});
  return res;
}

SpectralResult lobpcg_smallest_eig(const OperatorHandle& A, const Eigen::VectorXd& B, const EigenOptions& opts) {
  const Eigen::Index n = B.size();
  if (A.weights.size() != n) throw ShapeMismatch("operator and mass weights differ in size");
  const Eigen::VectorXd& W = A.weights;
  auto K = [&](const ScalarField& x) -> ScalarField { return W.cwiseProduct(A(x)); };
  auto mdot = [&](const ScalarField& a, const ScalarField& b) { return (B.array() * a.array() * b.array()).sum(); };
  const auto precond = make_preconditioner(A, B);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ScalarField x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * uni(rng);
  x /= std::sqrt(mdot(x, x));
  ScalarField Kx = K(x);
  double lambda = x.dot(Kx);
  ScalarField p;
  const double floor_norm = 1e-4 * relative_norm(A, B);

  SpectralResult res;
  res.method = "lobpcg";
  for (int it = 0; it <= opts.max_iter; ++it) {
    const ScalarField r = Kx - lambda * B.cwiseProduct(x);
    const double rn = std::sqrt((r.array().square() / B.array()).sum());
    const double resid = rn / (std::abs(lambda) + floor_norm);
    res.trace.push_back({lambda, resid});
    res.iterations = it;
    if (resid <= opts.tol) {
      res.converged = true;
      break;
    }
    if (it == opts.max_iter) break;

    std::vector<ScalarField> basis{x, precond(r)};
    if (p.size() == n) basis.push_back(p);
    // Two passes of modified Gram-Schmidt in the B inner product.
    std::vector<ScalarField> q;
    for (auto& v : basis) {
      const double original = std::sqrt(mdot(v, v));
      if (!(original > 0.0)) continue;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& qj : q) v -= mdot(qj, v) * qj;
      const double nv = std::sqrt(mdot(v, v));
      if (nv > 1e-10 * original) q.push_back(v / nv);
    }
    const int k = static_cast<int>(q.size());
    std::vector<ScalarField> kq(k);
    for (int j = 0; j < k; ++j) kq[j] = K(q[j]);
    Eigen::MatrixXd H(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) H(a, b) = q[a].dot(kq[b]);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd y = es.eigenvectors().col(0);

    ScalarField xn = y[0] * q[0];
    ScalarField pn = ScalarField::Zero(n);
    for (int j = 1; j < k; ++j) pn += y[j] * q[j];
    xn += pn;
    p = pn;
    x = xn / std::sqrt(mdot(xn, xn));
    Kx = K(x);
    lambda = x.dot(Kx);
  }
  res.eigenvector = x;
  finalize(A, B, res);
  res.converged = res.converged && res.residual <= opts.tol;
  return res;
}

SpectralResult smallest_eig(const OperatorHandle& A, const Eigen::VectorXd& B, const EigenOptions& opts) {
  if (B.size() != A.weights.size()) throw ShapeMismatch("operator and mass weights differ in size");
  if (!(B.minCoeff() > 0.0)) throw InvalidModel("mass weights must be strictly positive");
  if (B.size() <= opts.dense_threshold) return dense_smallest_eig(A, B, opts);
  return lobpcg_smallest_eig(A, B, opts);
}

SpectralResult lambda1_yamabe(const ConformalMetric& metric, const EigenOptions& opts) {
  const TransformedProblem tp = transformed_quadratic_forms(metric, Which::L);
  return smallest_eig(tp.A, tp.B, opts);
}

SpectralResult lambda1_paneitz(const ConformalMetric& metric, const EigenOptions& opts) {
  const TransformedProblem tp = transformed_quadratic_forms(metric, Which::P);
  SpectralResult res = smallest_eig(tp.A, tp.B, opts);
  res.zonal_upper_bound = metric.space().backend() == Backend::ZonalSphere;
  return res;
}

// ---------------------------------------------------------------------------

YamabeEstimate yamabe_invariant(const ConformalMetric& metric, const YamabeOptions& opts) {
  const int n = metric.dimension();
  if (n < 3) throw DimensionError("the Yamabe invariant is defined here for n >= 3");
  const DiscreteSpace& space = metric.space();
  const OperatorHandle L = yamabe_base(metric.space_ptr(), metric.base_curvature());
  const Eigen::VectorXd& w = space.quad_weights();
  const double p = 2.0 * n / (n - 2.0);

  auto lp_norm = [&](const ScalarField& h) {
    return std::pow((w.array() * h.array().abs().pow(p)).sum(), 1.0 / p);
  };
  auto energy = [&](const ScalarField& h) {
    const double num = w.dot(h.cwiseProduct(L(h)));
    const double np = lp_norm(h);
    return num / (np * np);
  };

  std::function<ScalarField(const ScalarField&)> sobolev;
  if (L.has_symbol() && space.has_spectral_calculus()) {
    const Eigen::VectorXd spec = space.laplacian_spectrum();
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < spec.size(); ++i) lo = std::min(lo, L.symbol(spec[i]));
    const double shift = lo > 0.0 ? 0.0 : 1.0 + std::abs(lo);
    auto phi = L.symbol;
    sobolev = [&space, phi, shift](const ScalarField& g) {
      return space.apply_spectral_function(g, [&](double lam) { return 1.0 / (phi(lam) + shift); });
    };
  } else {
    const double scale = 1.0 / (L.norm_estimate + 1.0);
    sobolev = [scale](const ScalarField& g) { return ScalarField(scale * g); };
  }

  const ScalarField frame = metric.exp_u(0.5 * (n - 2.0));
  std::vector<ScalarField> starts{frame};
  if (opts.eigenfunction_start) starts.push_back(lambda1_yamabe(metric).eigenvector.cwiseAbs());
  for (int k = 0; k < opts.restarts; ++k) {
    std::mt19937_64 rng(opts.seed + 1 + static_cast<std::uint64_t>(k));
    std::normal_distribution<double> gauss;
    ScalarField noise(space.node_count());
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = gauss(rng);
    if (space.has_spectral_calculus())
      noise = space.apply_spectral_function(noise, [](double lam) { return 1.0 / ((1.0 + lam) * (1.0 + lam)); });
    const double amp = noise.cwiseAbs().maxCoeff();
    if (amp > 0.0) noise *= 0.5 / amp;
    starts.push_back(frame.cwiseProduct(noise.array().exp().matrix()));
  }

  YamabeEstimate best;
  best.value = std::numeric_limits<double>::infinity();
  bool all_converged = true;
  int total_iter = 0;
  for (const auto& start : starts) {
    ScalarField h = start / lp_norm(start);
    double e = energy(h);
    std::vector<TracePoint> trace;
    bool converged = false;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
      const ScalarField Lh = L(h);
      const double num = w.dot(h.cwiseProduct(Lh));
      const ScalarField nonlinear = (h.array().abs().pow(p - 2.0) * h.array()).matrix();
      const ScalarField grad = sobolev(Lh - num * nonlinear);
      const double gnorm = std::sqrt(w.dot(grad.cwiseProduct(grad)) / w.sum());
      trace.push_back({e, gnorm});
      if (gnorm <= 1e-14 * std::sqrt(w.dot(h.cwiseProduct(h)) / w.sum())) {
        converged = true;
        break;
      }
      const int sz = static_cast<int>(trace.size());
      if (sz > opts.window &&
          std::abs(trace[sz - 1 - opts.window].value - e) <= opts.tol * std::abs(e)) {
        converged = true;
        break;
      }
      double t = opts.step;
      bool accepted = false;
      for (int bt = 0; bt < 40; ++bt, t *= 0.5) {
        ScalarField trial = h - t * grad;
        trial /= lp_norm(trial);
        const double et = energy(trial);
        if (et <= e) {
          h = trial;
          e = et;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        converged = true;  // no descent direction left at working precision
        break;
      }
    }
    total_iter += it;
    all_converged = all_converged && converged;
    best.start_values.push_back(e);
    if (e < best.value) {
      best.value = e;
      best.minimizer = h;
      best.trace = std::move(trace);
    }
  }
  best.iterations = total_iter;
  best.converged = all_converged;
  return best;
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "iteration,value,residual\n";
  out.precision(17);
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << i << ',' << trace[i].value << ',' << trace[i].residual << '\n';
}

}  // namespace confspec
