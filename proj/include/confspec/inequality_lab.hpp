#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "confspec/dirac_analytic.hpp"
#include "confspec/eigensolve.hpp"
#include "confspec/report.hpp"

namespace confspec {

struct LabOptions {
  Tolerances tol;
  EigenOptions eigen;
  YamabeOptions yamabe;
  double uniformization_tol = 1e-3;  // relative spread of the uniformized curvature
};

// lambda_1(L_u)^2 >= 24 int Q_u dv_u / Vol(g_u), n = 4.
InequalityReport verify_thm_dim4(const ConformalMetric& metric, const LabOptions& opts = {});

// lambda_1(L_u)^2 >= 16n(n-1)^2/((n^2-4)(n-4)) lambda_1(P_u), n >= 5, lambda_1(P_u) > 0.
InequalityReport verify_thm_general(const ConformalMetric& metric, const LabOptions& opts = {});

// lambda_1(D)^4 >= lambda_1(L)^2/9 >= (8/3) int Q dv / Vol on the class of S^4.
InequalityReport verify_corollary4(const SpinModel& spin, const ConformalMetric& metric, const LabOptions& opts = {});

// lambda_1(D)^4 >= n^2/(16(n-1)^2) lambda_1(L)^2 >= n^3/((n^2-4)(n-4)) lambda_1(P), n >= 5.
InequalityReport verify_corollary_n(const SpinModel& spin, const ConformalMetric& metric,
                                    const LabOptions& opts = {});

// lambda_1(D)^2 >= 2 pi chi / Area on a triangle mesh, together with the
// uniformization check: K_{u0} e^{2 u0} is constant and equal to the right side.
InequalityReport verify_bar_2d(const DiscreteSpace& space, const std::optional<SpinModel>& reference,
                               const LabOptions& opts = {});

// Round S^2 with the area of the mesh.
SpinModel area_matched_reference(const DiscreteSpace& space);

// lambda_1(L_u) Vol_u^{2/n} >= Y; with Dirac data also
// lambda_1(D)^2 Vol_u^{2/n} >= n/(4(n-1)) lambda_1(L_u) Vol_u^{2/n}.
// `trace` receives the energy trace of the winning descent start.
InequalityReport verify_yamabe_chain(const ConformalMetric& metric, const std::optional<SpinModel>& spin = {},
                                     const LabOptions& opts = {}, std::vector<TracePoint>* trace = nullptr);

// lambda_1(D)^2 >= n/(4(n-1)) lambda_1(L_u); a probe off constant u.
InequalityReport verify_hijazi(const SpinModel& spin, const ConformalMetric& metric, const LabOptions& opts = {});

// Treats u as a trial weight on the base metric g:
// lambda_1(D)^2 >= n/(4(n-1)) lambda_1(L) >= n/(4(n-1)) inf(R_u e^{2u}).
InequalityReport verify_hijazi_functional(const ConformalMetric& metric, const std::optional<SpinModel>& spin = {},
                                          const LabOptions& opts = {});

// 16 pi^2 chi = 2 int Q_u dv_u + (1/2) int |W|^2 dv on the class of S^4 or T^4.
InequalityReport verify_chern_gauss_bonnet(const ConformalMetric& metric, const LabOptions& opts = {});

// Seeded random smooth deformations with max |u - mean| <= max_amplitude,
// built from cos(m theta) on spheres and axis cosines on tori, m <= max_mode.
std::vector<ScalarField> random_deformations(const DiscreteSpace& space, int count, std::uint64_t seed,
                                             double max_amplitude = 0.5, int max_mode = 4);

// amplitude * cos(mode theta) on spheres, amplitude * cos(2 pi mode x_1 / L_1) on tori.
ScalarField cosine_deformation(const DiscreteSpace& space, double amplitude, int mode);

}  // namespace confspec
