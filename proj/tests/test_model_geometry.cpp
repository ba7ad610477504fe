#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "confspec/discretization.hpp"
#include "confspec/errors.hpp"
#include "confspec/model_geometry.hpp"

using namespace confspec;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Scalar curvature of e^{2 phi} delta on R^n at x, by central differences:
// R = -e^{-2 phi} (2(n-1) lap(phi) + (n-2)(n-1) |grad phi|^2).
template <class Phi>
double conformally_flat_scalar(int n, const Eigen::VectorXd& x, Phi phi) {
  const double h = 1e-3;
  double lap = 0.0, grad2 = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = h;
    const double p = phi(x + e), m = phi(x - e), p2 = phi(x + 2 * e), m2 = phi(x - 2 * e), c = phi(x);
    lap += (-p2 + 16 * p - 30 * c + 16 * m - m2) / (12 * h * h);
    const double d = (-p2 + 8 * p - 8 * m + m2) / (12 * h);
    grad2 += d * d;
  }
  return -std::exp(-2.0 * phi(x)) * (2.0 * (n - 1) * lap + (n - 2.0) * (n - 1) * grad2);
}

// Stereographic chart of the round sphere of radius r.
double stereo_phi(const Eigen::VectorXd& x, double r) { return std::log(2.0 * r) - std::log1p(x.squaredNorm()); }

}  // namespace

TEST_CASE("round sphere curvature matches a finite-difference oracle") {
  struct Case {
    int n;
    double r;
  };
  for (const Case c : {Case{4, 1.0}, Case{2, 2.0}, Case{5, 1.0}, Case{3, 0.5}}) {
    Eigen::VectorXd x(c.n);
    for (int i = 0; i < c.n; ++i) x[i] = 0.1 * (i + 1);
    const double oracle = conformally_flat_scalar(c.n, x, [&](const Eigen::VectorXd& y) { return stereo_phi(y, c.r); });
    const CurvatureData d = model_curvature(ModelManifold::round_sphere(c.n, c.r));
    CHECK(d.scalar_R == Approx(oracle).epsilon(1e-7));
  }
}

TEST_CASE("model_curvature closed forms") {
  const CurvatureData s4 = model_curvature(ModelManifold::round_sphere(4, 1.0));
  CHECK(s4.scalar_R == 12.0);
  REQUIRE(s4.ricci_coeff);
  CHECK(*s4.ricci_coeff == 3.0);
  CHECK(s4.einstein_norm_sq == 0.0);
  CHECK(s4.is_einstein());
  CHECK(s4.weyl_norm_sq == 0.0);

  const CurvatureData t5 = model_curvature(ModelManifold::flat_torus(5, 2 * kPi));
  CHECK(t5.scalar_R == 0.0);
  CHECK(*t5.ricci_coeff == 0.0);
  CHECK(*t5.schouten_norm_sq == 0.0);
  CHECK(*t5.q_value == 0.0);
  CHECK(t5.einstein_norm_sq == 0.0);

  const CurvatureData s2 = model_curvature(ModelManifold::round_sphere(2, 2.0));
  CHECK(s2.scalar_R == Approx(0.5).epsilon(1e-15));
  CHECK(s2.scalar_R / 2 == Approx(0.25).epsilon(1e-15));
  CHECK_FALSE(s2.q_value.has_value());

  TriMesh2D mesh = meshes::icosphere(1);
  CHECK_THROWS_AS(model_curvature(ModelManifold::tri_mesh(mesh)), UnsupportedInput);
}

TEST_CASE("Q curvature from R and Schouten") {
  CHECK(q_from_curvature(model_curvature(ModelManifold::round_sphere(4, 1.0))) == Approx(6.0).epsilon(1e-15));
  CHECK(q_from_curvature(model_curvature(ModelManifold::round_sphere(5, 1.0))) == Approx(105.0 / 8).epsilon(1e-15));
  CHECK(q_from_curvature(model_curvature(ModelManifold::flat_torus(4, 1.0))) == 0.0);
  CurvatureData bad;
  bad.n = 2;
  CHECK_THROWS_AS(q_from_curvature(bad), DimensionError);
}

TEST_CASE("sphere invariants across n and r") {
  for (int n = 3; n <= 8; ++n) {
    const CurvatureData unit = model_curvature(ModelManifold::round_sphere(n, 1.0));
    CHECK(*unit.q_value == Approx(n * (n * n - 4.0) / 8).epsilon(1e-14));
    for (double r : {0.5, 1.7, 3.0}) {
      const CurvatureData c = model_curvature(ModelManifold::round_sphere(n, r));
      CHECK(*c.schouten_norm_sq == Approx(n / (4 * std::pow(r, 4))).epsilon(1e-12));
      CHECK(*c.q_value == Approx(*unit.q_value / std::pow(r, 4)).epsilon(1e-12));
      CHECK(*c.q_value == Approx(q_from_curvature(c)).epsilon(1e-14));
    }
  }
}

TEST_CASE("four-dimensional Q identity") {
  CHECK(q_identity_dim4(model_curvature(ModelManifold::round_sphere(4, 1.0))) == Approx(0.0).epsilon(1e-12));
  CHECK(q_identity_dim4(model_curvature(ModelManifold::flat_torus(4, 1.0))) == 0.0);
  const CurvatureData syn = curvature_from_invariants(4, 12.0, 1.0);
  CHECK(std::abs(q_identity_dim4(syn)) <= 1e-12 * 144);
  for (double r : {0.3, 1.0, 2.5}) {
    const CurvatureData c = model_curvature(ModelManifold::round_sphere(4, r));
    CHECK(std::abs(q_identity_dim4(c)) <= 1e-12 * std::max(1.0, c.scalar_R * c.scalar_R));
  }
  CHECK_THROWS_AS(q_identity_dim4(model_curvature(ModelManifold::round_sphere(5, 1.0))), DimensionError);
}

TEST_CASE("Paneitz coefficients") {
  // P = Delta^2 + (alpha R + beta R/n) Delta + ...; on S^5 the middle term is 11/2.
  CHECK(paneitz_alpha(5) * 20 + paneitz_beta(5) * 4 == Approx(5.5).epsilon(1e-15));
  // On S^4, P = Delta(Delta + 2).
  CHECK(paneitz_alpha(4) * 12 + paneitz_beta(4) * 3 == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("model invariants are enforced") {
  CHECK_THROWS_AS(ModelManifold::round_sphere(4, 0.0), InvalidModel);
  CHECK_THROWS_AS(ModelManifold::round_sphere(1, 1.0), InvalidModel);
  CHECK_THROWS_AS(ModelManifold::flat_torus({1.0, -1.0}), InvalidModel);
  CHECK(ModelManifold::round_sphere(4, 1.0).volume() == Approx(8 * kPi * kPi / 3).epsilon(1e-15));
  CHECK(ModelManifold::flat_torus({1.0, 2.0, 3.0}).volume() == 6.0);
  CHECK(unit_sphere_volume(5) == Approx(kPi * kPi * kPi).epsilon(1e-15));
}

TEST_CASE("closed mesh validation") {
  TriMesh2D ico = meshes::icosphere(0);
  CHECK(ico.euler_characteristic() == 2);
  CHECK_NOTHROW(validate_closed_mesh(ico));

  TriMesh2D open = ico;
  open.triangles.pop_back();
  CHECK_THROWS_AS(validate_closed_mesh(open), InvalidModel);

  TriMesh2D flipped = ico;
  std::swap(flipped.triangles[0][0], flipped.triangles[0][1]);
  CHECK_THROWS_AS(validate_closed_mesh(flipped), InvalidModel);

  TriMesh2D isolated = ico;
  isolated.vertices.push_back(Eigen::Vector3d(5, 5, 5));
  CHECK_THROWS_AS(validate_closed_mesh(isolated), InvalidModel);
}

TEST_CASE("OFF round trip") {
  const TriMesh2D mesh = meshes::icosphere(2);
  std::stringstream ss;
  write_off(ss, mesh);
  const TriMesh2D back = read_off(ss);
  REQUIRE(back.vertices.size() == mesh.vertices.size());
  REQUIRE(back.triangles == mesh.triangles);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) CHECK((back.vertices[i] - mesh.vertices[i]).norm() == 0.0);

  std::stringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n");
  CHECK_THROWS_AS(read_off(bad), InvalidModel);
  std::stringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  CHECK_THROWS_AS(read_off(quad), InvalidModel);
}
