#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "confspec/conformal_operators.hpp"

namespace confspec {

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 500;
  std::uint64_t seed = 0;
  // Problems with at most this many nodes go to the dense solver.
  Eigen::Index dense_threshold = 2048;
};

struct TracePoint {
  double value = 0.0;
  double residual = 0.0;
};

struct SpectralResult {
  double eigenvalue = 0.0;
  ScalarField eigenvector;  // B-normalized, positive weighted mean
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string method;
  // Set on zonal-sphere fourth-order problems: lambda_1 over zonal functions
  // bounds the full lambda_1 from above.
  bool zonal_upper_bound = false;
  std::vector<TracePoint> trace;
};

// Scaled residual |A v - lambda B v|_{B^-1} / ((|lambda| + 1e-4 |A|) |v|_B).
// The operator-norm floor keeps the measure meaningful when lambda = 0.
double eigen_residual(const OperatorHandle& A, const Eigen::VectorXd& B, const ScalarField& v, double lambda);

// Smallest eigenpair of A v = lambda B v (A symmetric in A.weights, B > 0).
SpectralResult smallest_eig(const OperatorHandle& A, const Eigen::VectorXd& B, const EigenOptions& opts = {});
// Forced paths; smallest_eig chooses between them by node count.
SpectralResult dense_smallest_eig(const OperatorHandle& A, const Eigen::VectorXd& B, const EigenOptions& opts = {});
SpectralResult lobpcg_smallest_eig(const OperatorHandle& A, const Eigen::VectorXd& B,
                                   const EigenOptions& opts = {});
// Every generalized eigenvalue, ascending, from a dense factorization.
Eigen::VectorXd dense_generalized_spectrum(const OperatorHandle& A, const Eigen::VectorXd& B);

// lambda_1(L_u); the eigenvector is h in the base frame, the eigenfunction of
// L_u is h exp(-(n-2)u/2).
SpectralResult lambda1_yamabe(const ConformalMetric& metric, const EigenOptions& opts = {});
SpectralResult lambda1_paneitz(const ConformalMetric& metric, const EigenOptions& opts = {});

struct YamabeOptions {
  double step = 1.0;
  double tol = 1e-7;  // relative energy change over `window` iterations
  int window = 10;
  int max_iter = 2000;
  int restarts = 3;
  std::uint64_t seed = 0;
  // Also start from |h_1|, the first eigenfunction of L_u in the base frame;
  // its Yamabe quotient is at most lambda_1(L_u) Vol^{2/n}.
  bool eigenfunction_start = true;
};

struct YamabeEstimate {
  double value = 0.0;
  ScalarField minimizer;  // base frame, unit L^{2n/(n-2)} norm
  int iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;  // energy and gradient norm of the winning start
  std::vector<double> start_values;
};

// Projected (Sobolev-preconditioned) gradient descent on the Yamabe quotient
// of g_u. Starts from the constant function of g_u, optionally |h_1|, then
// seeded random positive fields; reports the smallest energy reached.
YamabeEstimate yamabe_invariant(const ConformalMetric& metric, const YamabeOptions& opts = {});

// iteration,value,residual CSV.
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);

}  // namespace confspec
