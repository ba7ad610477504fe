#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "confspec/conformal_operators.hpp"
#include "confspec/eigensolve.hpp"
#include "confspec/errors.hpp"

using namespace confspec;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const ZonalSphereSpace> sphere(int n, int N = 64) { return build_zonal_sphere(n, 1.0, N); }

CurvatureData curv(const DiscreteSpace& s) { return model_curvature(s.model()); }

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

ScalarField zonal(const ZonalSphereSpace& s, const std::function<double(double)>& f) {
  ScalarField out(s.node_count());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = f(s.angles()[i]);
  return out;
}

// Random zonal field: a few cosine modes, scaled to sup amplitude `amp`.
ScalarField random_zonal(const ZonalSphereSpace& s, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a1 = U(rng), a2 = U(rng), a3 = U(rng), c = U(rng);
  ScalarField u = zonal(s, [&](double t) { return c + a1 * std::cos(t) + a2 * std::cos(2 * t) + a3 * std::cos(3 * t); });
  return u * (amp * std::abs(U(rng)) / max_abs(u));
}

}  // namespace

TEST_CASE("Yamabe operator on constants") {
  const auto s4 = sphere(4), s5 = sphere(5);
  CHECK(max_abs(yamabe_base(s4, curv(*s4))(s4->constant(1.0)) - s4->constant(12.0)) <= 1e-10);
  CHECK(max_abs(yamabe_base(s5, curv(*s5))(s5->constant(1.0)) - s5->constant(20.0)) <= 1e-10);
  const auto t5 = build_torus(std::vector<double>(5, 1.0), 8);
  CHECK(max_abs(yamabe_base(t5, curv(*t5))(t5->constant(1.0))) <= 1e-10);
  const auto s2 = sphere(2);
  CHECK_THROWS_AS(yamabe_base(s2, curv(*s2)), DimensionError);
  CHECK(yamabe_coefficient(4) == 6.0);
  CHECK(yamabe_coefficient(6) == 5.0);
}

TEST_CASE("Paneitz operator") {
  const auto s5 = sphere(5);
  const OperatorHandle P5 = paneitz_base(s5, curv(*s5));
  CHECK(max_abs(P5(s5->constant(1.0)) - s5->constant(105.0 / 16)) <= 1e-10);

  // On S^4, P = Delta(Delta + 2); zonal harmonics diagonalize it.
  const auto s4 = sphere(4);
  const OperatorHandle P4 = paneitz_base(s4, curv(*s4));
  CHECK(max_abs(P4(s4->constant(1.0))) <= 1e-10);
  // Rounding floor of a fourth-order collocation operator: N eps |P|.
  const double floor = 64 * 2.3e-16 * P4.norm_estimate;
  for (int l : {1, 2, 5, 9, 20}) {
    const double lam = l * (l + 3.0);
    const ScalarField h = s4->harmonic(l);
    CHECK(max_abs(P4(h) - lam * (lam + 2) * h) <= (1e-9 * lam * (lam + 2) + floor) * max_abs(h));
  }

  const auto t5 = build_torus(std::vector<double>(5, 2 * kPi), 8);
  const ScalarField mode = t5->fourier_mode(3, 1);
  CHECK(max_abs(paneitz_base(t5, curv(*t5))(mode) - mode) <= 1e-10);

  CHECK_THROWS_AS(paneitz_base(s4, curvature_from_invariants(4, 12.0, 1.0)), UnsupportedInput);
  CHECK_THROWS_AS(paneitz_base(s4, curv(*s5)), DimensionError);
}

TEST_CASE("operators are symmetric in their weights") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const auto s5 = sphere(5);
  const ConformalMetric m(s5, zonal(*s5, [](double t) { return 0.3 * std::cos(t) - 0.1 * std::cos(2 * t); }));
  for (Which w : {Which::L, Which::P}) {
    const OperatorHandle op = conjugated_operator(m, w);
    for (int trial = 0; trial < 20; ++trial) {
      ScalarField f(s5->node_count()), h(s5->node_count());
      for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = std::cos((trial + 1) * s5->angles()[i]) + 0.1 * g(rng);
      for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = std::sin((trial + 2) * s5->angles()[i] / 2) + 0.1 * g(rng);
      const double a = (op.weights.array() * op(f).array() * h.array()).sum();
      const double b = (op.weights.array() * f.array() * op(h).array()).sum();
      const double scale = op.norm_estimate * std::sqrt((op.weights.array() * f.array().square()).sum() *
                                                        (op.weights.array() * h.array().square()).sum());
      CHECK(std::abs(a - b) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("conformal covariance of the transformed forms") {
  const auto s4 = sphere(4);
  const int n = 4;
  const ScalarField u = zonal(*s4, [](double t) { return 0.4 * std::cos(t) + 0.2 * std::cos(3 * t); });
  const ConformalMetric m(s4, u);
  const OperatorHandle L = yamabe_base(s4, curv(*s4));
  const OperatorHandle P = paneitz_base(s4, curv(*s4));

  const ScalarField f = zonal(*s4, [](double t) { return 1.0 + std::cos(2 * t); });
  // L_u f = e^{-(n+2)u/2} L(e^{(n-2)u/2} f); P_u f = e^{-(n+4)u/2} P(e^{(n-4)u/2} f).
  const ScalarField Luf = (-(n + 2) * u / 2).array().exp() * L(((n - 2) * u / 2).array().exp() * f.array()).array();
  const ScalarField Puf = (-(n + 4) * u / 2).array().exp() * P(((n - 4) * u / 2).array().exp() * f.array()).array();
  CHECK(max_abs(conjugated_operator(m, Which::L)(f) - Luf) <= 1e-11 * max_abs(Luf));
  CHECK(max_abs(conjugated_operator(m, Which::P)(f) - Puf) <= 1e-11 * max_abs(Puf));

  // <f, L_u f>_{dv_u} / <f, f>_{dv_u} is the (A, B) quotient of h = e^{(n-2)u/2} f.
  for (Which w : {Which::L, Which::P}) {
    const TransformedProblem tp = transformed_quadratic_forms(m, w);
    const ScalarField h = (tp.conformal_power * u).array().exp() * f.array();
    const double num_u = (m.volume_weights().array() * f.array() * conjugated_operator(m, w)(f).array()).sum();
    const double den_u = (m.volume_weights().array() * f.array().square()).sum();
    const double num = inner(*s4, h, tp.A(h));
    const double den = (tp.B.array() * h.array().square()).sum();
    CHECK(num / den == Approx(num_u / den_u).epsilon(1e-11));
  }

  const TransformedProblem base = transformed_quadratic_forms(ConformalMetric::base(s4), Which::L);
  CHECK(max_abs(base.B - s4->quad_weights()) == 0.0);
}

TEST_CASE("scalar curvature of a conformal metric") {
  for (int n : {3, 4, 6}) {
    const auto s = sphere(n);
    CHECK(max_abs(scalar_curvature_of(ConformalMetric::base(s)) - s->constant(n * (n - 1.0))) <= 1e-10 * n * n);
    for (double c : {-0.7, 0.5}) {
      const ScalarField Ru = scalar_curvature_of(ConformalMetric(s, s->constant(c)));
      CHECK(max_abs(Ru - s->constant(n * (n - 1.0) * std::exp(-2 * c))) <= 1e-10 * n * n * std::exp(-2 * c));
    }
  }

  // u = 0.1 cos(theta) on S^4: Delta u = 0.4 cos(theta), |grad u|^2 = 0.01 sin^2(theta).
  const auto s4 = sphere(4);
  const ScalarField Ru = scalar_curvature_of(ConformalMetric(s4, 0.1 * s4->cos_angles()));
  for (Eigen::Index i = 0; i < Ru.size(); ++i) {
    const double x = s4->cos_angles()[i];
    const double oracle = std::exp(-0.2 * x) * (12.0 + 6.0 * 0.4 * x - 6.0 * 0.01 * (1 - x * x));
    CHECK(Ru[i] == Approx(oracle).epsilon(1e-6));
  }

  // u = 0.3 cos(3 theta) on S^5 against central differences in theta.
  const auto s5 = sphere(5);
  auto uf = [](double t) { return 0.3 * std::cos(3 * t); };
  const ScalarField R5 = scalar_curvature_of(ConformalMetric(s5, zonal(*s5, uf)));
  const double h = 1e-4;
  for (Eigen::Index i = 0; i < R5.size(); i += 5) {
    const double t = s5->angles()[i];
    const double d1 = (uf(t + h) - uf(t - h)) / (2 * h);
    const double d2 = (uf(t + h) - 2 * uf(t) + uf(t - h)) / (h * h);
    const double lap = -(d2 + 4.0 * std::cos(t) / std::sin(t) * d1);
    const double oracle = std::exp(-2 * uf(t)) * (20.0 + 8.0 * lap - 12.0 * d1 * d1);
    CHECK(R5[i] == Approx(oracle).epsilon(1e-6));
  }

  CHECK_THROWS_AS(scalar_curvature_of(ConformalMetric::base(sphere(2))), DimensionError);
}

TEST_CASE("Q curvature and its total") {
  const auto s4 = sphere(4);
  CHECK(max_abs(q_curvature_of(ConformalMetric::base(s4)) - s4->constant(6.0)) <= 1e-10);
  for (double c : {-0.4, 0.3})
    CHECK(max_abs(q_curvature_of(ConformalMetric(s4, s4->constant(c))) - s4->constant(6 * std::exp(-4 * c))) <= 1e-9);

  const double total = 16 * kPi * kPi;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField u = trial == 0 ? ScalarField(0.2 * s4->cos_angles()) : random_zonal(*s4, rng, 0.5);
    const ConformalMetric m(s4, u);
    const double pointwise = (m.volume_weights().array() * q_curvature_of(m).array()).sum();
    CHECK(pointwise == Approx(total).epsilon(1e-9));
    CHECK(total_q_curvature(m) == Approx(total).epsilon(1e-9));
  }

  // n = 5: the symmetric form agrees with the pointwise integral.
  const auto s5 = sphere(5);
  const ConformalMetric m5(s5, zonal(*s5, [](double t) { return 0.2 * std::cos(t); }));
  const double p5 = (m5.volume_weights().array() * q_curvature_of(m5).array()).sum();
  CHECK(total_q_curvature(m5) == Approx(p5).epsilon(1e-9));
  CHECK(total_q_curvature(ConformalMetric::base(s5)) == Approx(105.0 / 8 * kPi * kPi * kPi).epsilon(1e-12));

  const auto t4 = build_torus(std::vector<double>(4, 1.0), 8);
  const ConformalMetric mt(t4, 0.3 * t4->fourier_mode(0, 1));
  CHECK(std::abs(total_q_curvature(mt)) <= 1e-10);
  CHECK_THROWS_AS(q_curvature_of(ConformalMetric::base(sphere(3))), DimensionError);
}

TEST_CASE("conformal factor guard") {
  const auto s4 = sphere(4);
  CHECK_THROWS_AS(ConformalMetric(s4, s4->constant(3.5)), UnderflowError);
  CHECK_THROWS_AS(ConformalMetric(s4, s4->constant(std::nan(""))), UnderflowError);
  CHECK_THROWS_AS(ConformalMetric(s4, Eigen::VectorXd::Zero(5)), ShapeMismatch);
  CHECK(ConformalMetric::base(s4).volume() == Approx(8 * kPi * kPi / 3).epsilon(1e-12));
  CHECK(ConformalMetric(s4, s4->constant(0.5)).volume() == Approx(8 * kPi * kPi / 3 * std::exp(2.0)).epsilon(1e-12));
}

TEST_CASE("homothety of first eigenvalues") {
  const auto s4 = sphere(4);
  CHECK(lambda1_yamabe(ConformalMetric(s4, s4->constant(std::log(2.0)))).eigenvalue == Approx(3.0).epsilon(1e-10));
  for (double c : {-0.5, 0.25}) {
    CHECK(lambda1_yamabe(ConformalMetric(s4, s4->constant(c))).eigenvalue ==
          Approx(12 * std::exp(-2 * c)).epsilon(1e-10));
  }
  const auto s5 = sphere(5);
  for (double c : {-0.3, 0.6}) {
    CHECK(lambda1_paneitz(ConformalMetric(s5, s5->constant(c))).eigenvalue ==
          Approx(105.0 / 16 * std::exp(-4 * c)).epsilon(1e-10));
  }
}

TEST_CASE("hijazi functional never exceeds lambda_1") {
  const auto s4 = sphere(4);
  CHECK(hijazi_functional(ConformalMetric::base(s4)) == Approx(12.0).epsilon(1e-12));
  CHECK(hijazi_functional(ConformalMetric(s4, s4->constant(1.2))) == Approx(12.0).epsilon(1e-12));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const ConformalMetric m(s4, random_zonal(*s4, rng, 1.0));
    CHECK(hijazi_functional(m) <= 12.0 + 1e-9);
  }
  const auto t4 = build_torus(std::vector<double>(4, 1.0), 8);
  CHECK(hijazi_functional(ConformalMetric(t4, 0.2 * t4->fourier_mode(2, 1))) <= 1e-9);
  CHECK_THROWS_AS(hijazi_functional(ConformalMetric::base(sphere(2))), DimensionError);
}

TEST_CASE("two-dimensional uniformization") {
  {
    const auto s = build_trimesh(ModelManifold::tri_mesh(meshes::icosphere(3)));
    const ScalarField K = angle_defect_curvature(*s);
    const UniformizationResult r = uniformize_2d(*s, K);
    CHECK(r.residual <= 1e-8);
    CHECK(r.mean_curvature == Approx(4 * kPi / s->volume()).epsilon(1e-12));
    CHECK(std::abs(integrate(*s, r.u0)) <= 1e-12);
    CHECK(max_abs(r.u0) <= 2e-2);
  }
  {
    const auto s = build_trimesh(ModelManifold::tri_mesh(meshes::ellipsoid(4, {1.0, 1.0, 1.5})));
    const ScalarField K = angle_defect_curvature(*s);
    const UniformizationResult r = uniformize_2d(*s, K);
    CHECK(r.residual <= 1e-8);
    const double target = 2 * kPi * 2 / s->volume();
    // (1/2) R_{u0} e^{2 u0} = K_{u0} e^{2 u0} = Delta u0 + K.
    const ScalarField Ke2u = gauss_curvature_of(*s, K, r.u0).array() * (2 * r.u0).array().exp();
    CHECK(max_abs(Ke2u - s->constant(target)) <= 1e-3 * target);
    CHECK(max_abs(r.u0) > 1e-2);
  }
  {
    const auto s = build_trimesh(ModelManifold::tri_mesh(meshes::flat_torus(12, 12, 1.0, 1.0)));
    const UniformizationResult r = uniformize_2d(*s, angle_defect_curvature(*s));
    CHECK(max_abs(r.u0) <= 1e-12);
    CHECK(r.mean_curvature == Approx(0.0).scale(1.0));
  }
  {
    // The rescaled-edge route agrees on a nearly round mesh.
    const auto s = build_trimesh(ModelManifold::tri_mesh(meshes::icosphere(4)));
    const UniformizationResult r = uniformize_2d(*s, angle_defect_curvature(*s));
    const ScalarField K2 = rescaled_mesh_curvature(*s, r.u0).array() * (2 * r.u0).array().exp();
    CHECK(max_abs(K2 - s->constant(r.mean_curvature)) <= 1e-3 * r.mean_curvature);
  }
  const auto zonal2 = sphere(2);
  CHECK_THROWS_AS(uniformize_2d(*zonal2, zonal2->constant(1.0)), UnsupportedInput);
}
