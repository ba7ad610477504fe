#pragma once

#include <functional>
#include <string>

#include "confspec/discretization.hpp"
#include "confspec/model_geometry.hpp"

namespace confspec {

enum class OperatorKind { Laplacian, Yamabe, Paneitz, Custom };

// A linear operator on a DiscreteSpace, symmetric in the inner product with
// per-node weights `weights`. When the operator is a function of the base
// Laplacian its symbol is recorded, which enables spectral preconditioning.
struct OperatorHandle {
  std::function<ScalarField(const ScalarField&)> apply;
  Eigen::VectorXd weights;
  OperatorKind kind = OperatorKind::Custom;
  int n = 0;
  bool transformed = false;
  std::string descriptor;
  std::function<double(double)> symbol;  // empty unless apply == symbol(Delta)
  double norm_estimate = 0.0;            // bound on |apply| relative to weights
  SpacePtr space;

  ScalarField operator()(const ScalarField& f) const { return apply(f); }
  bool has_symbol() const { return static_cast<bool>(symbol); }
};

// phi(Delta) on a space with spectral calculus.
OperatorHandle spectral_operator(SpacePtr space, std::function<double(double)> phi, std::string descriptor,
                                 OperatorKind kind = OperatorKind::Custom);
OperatorHandle laplacian_operator(SpacePtr space);

// f -> 4(n-1)/(n-2) Delta f + R f.
OperatorHandle yamabe_base(SpacePtr space, const CurvatureData& curv);
// Einstein bases only: f -> Delta^2 f + (alpha R + beta R/n) Delta f + (n-4)/2 Q f.
OperatorHandle paneitz_base(SpacePtr space, const CurvatureData& curv);

double yamabe_coefficient(int n);  // 4(n-1)/(n-2)

// Metric e^{2u} g on the base of `space`. |u| is bounded by kMaxAmplitude so
// every exponential weight stays well conditioned.
class ConformalMetric {
 public:
  static constexpr double kMaxAmplitude = 3.0;

  ConformalMetric(SpacePtr space, ScalarField u);
  static ConformalMetric base(SpacePtr space) { return {space, space->constant(0.0)}; }

  const DiscreteSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int dimension() const { return space_->dimension(); }
  const ScalarField& u() const { return u_; }
  // e^{n u} dv at each node.
  const Eigen::VectorXd& volume_weights() const { return volume_weights_; }
  double volume() const { return volume_weights_.sum(); }
  // e^{k u} pointwise.
  ScalarField exp_u(double k) const;
  bool is_constant(double tol = 1e-14) const;
  // Base curvature (the base model is Einstein for spheres and tori).
  const CurvatureData& base_curvature() const { return curvature_; }

 private:
  SpacePtr space_;
  ScalarField u_;
  Eigen::VectorXd volume_weights_;
  CurvatureData curvature_;
};

enum class Which { L, P };

// Generalized problem whose smallest Rayleigh quotient <h, A h>_dv / sum B h^2
// is lambda_1 of the transformed operator: B = e^{2u} dv for L, e^{4u} dv for P.
struct TransformedProblem {
  OperatorHandle A;
  Eigen::VectorXd B;
  Which which;
  double conformal_power;  // h = e^{power u} f maps eigenfunctions back
};

TransformedProblem transformed_quadratic_forms(const ConformalMetric& metric, Which which);

// The operator of g_u itself, f -> e^{-b u} A(e^{a u} f), symmetric in dv_u.
OperatorHandle conjugated_operator(const ConformalMetric& metric, Which which);

// R_u = e^{-2u} (L h)/h with h = e^{(n-2)u/2}.
ScalarField scalar_curvature_of(const ConformalMetric& metric);
// n = 4: Q_u = e^{-4u}(P u + Q); n >= 5: Q_u = 2/(n-4) e^{-4u} (P w)/w, w = e^{(n-4)u/2}.
ScalarField q_curvature_of(const ConformalMetric& metric);
// integral of Q_u dv_u, evaluated as Q Vol + <P 1, u> (n = 4) or 2/(n-4) <w, P w>.
double total_q_curvature(const ConformalMetric& metric);

// Gauss curvature equation on surfaces: K_u = e^{-2u}(Delta u + K).
ScalarField gauss_curvature_of(const DiscreteSpace& space, const ScalarField& base_K, const ScalarField& u);

// min over nodes of (L h)/h for h = e^{(n-2)u/2}; never exceeds lambda_1(L).
double hijazi_functional(const ConformalMetric& metric);

struct UniformizationResult {
  ScalarField u0;
  double residual = 0.0;  // ||Delta u0 - (Kbar - K)|| / ||Kbar - K|| in the dv norm
  int iterations = 0;
  double mean_curvature = 0.0;  // Kbar = 2 pi chi / Area
};

// Solves Delta u0 = Kbar - K with sum(w u0) = 0 on a triangle mesh.
UniformizationResult uniformize_2d(const DiscreteSpace& space, const ScalarField& K, double tol = 1e-12,
                                   int max_iter = 20000);

// Angle-defect curvature of the mesh after scaling every edge by
// exp((u_i + u_j)/2); an independent geometric route to K_u.
ScalarField rescaled_mesh_curvature(const DiscreteSpace& space, const ScalarField& u);

}  // namespace confspec
