#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "confspec/model_geometry.hpp"

namespace confspec {

// Per-node samples on a DiscreteSpace.
using ScalarField = Eigen::VectorXd;

enum class Backend : std::uint8_t { ZonalSphere = 1, TorusGrid = 2, TriMesh = 3 };

std::string to_string(Backend b);

// Quadrature nodes and weights plus a nonnegative Laplacian (Delta = delta d)
// that is symmetric with respect to the quadrature weights. Immutable once
// built; share through std::shared_ptr<const DiscreteSpace>.
class DiscreteSpace {
 public:
  virtual ~DiscreteSpace() = default;

  Backend backend() const { return backend_; }
  int dimension() const { return dim_; }
  Eigen::Index node_count() const { return weights_.size(); }
  const Eigen::VectorXd& quad_weights() const { return weights_; }
  const ModelManifold& model() const { return model_; }
  double volume() const { return weights_.sum(); }

  virtual ScalarField apply_laplacian(const ScalarField& f) const = 0;

  // Spectral calculus: phi(Delta) f through the eigenbasis of the discrete
  // Laplacian. Available on the sphere and torus backends.
  virtual bool has_spectral_calculus() const { return false; }
  virtual ScalarField apply_spectral_function(const ScalarField& f,
                                              const std::function<double(double)>& phi) const;
  // Every eigenvalue of the discrete Laplacian, ascending.
  virtual Eigen::VectorXd laplacian_spectrum() const;
  virtual double laplacian_norm_estimate() const = 0;

  // Coordinates used to sample analytic functions: the polar angle on the
  // zonal sphere, the grid point on a torus, the vertex position on a mesh.
  virtual Eigen::VectorXd node_coordinates(Eigen::Index i) const = 0;

  ScalarField sample(const std::function<double(const Eigen::VectorXd&)>& fn) const;
  ScalarField constant(double c) const { return ScalarField::Constant(node_count(), c); }
  void check_field(const ScalarField& f) const;

 protected:
  DiscreteSpace(Backend b, int dim, ModelManifold model)
      : backend_(b), dim_(dim), model_(std::move(model)) {}
  Eigen::VectorXd weights_;

 private:
  Backend backend_;
  int dim_;
  ModelManifold model_;
};

using SpacePtr = std::shared_ptr<const DiscreteSpace>;

// Zonal functions on S^n_r collocated at the Gauss-Gegenbauer nodes of the
// weight (sin theta)^{n-1}. The Laplacian acts on zonal functions as
// -(sin)^{1-n} d/dtheta ((sin)^{n-1} d/dtheta) / r^2 and is applied through
// the orthonormal Gegenbauer synthesis table.
class ZonalSphereSpace final : public DiscreteSpace {
 public:
  struct Tables {
    std::vector<double> x;        // cos(theta) at the nodes
    std::vector<double> w;        // Gauss weights for (1 - x^2)^{(n-2)/2} dx
    Eigen::MatrixXd synthesis;    // orthonormal polynomial k at node i
  };

  ZonalSphereSpace(int n, double radius, Tables tables);

  double radius() const { return radius_; }
  const Eigen::VectorXd& angles() const { return theta_; }
  const Eigen::VectorXd& cos_angles() const { return x_; }
  // Orthonormal (w.r.t. quad_weights) zonal harmonic of degree k at the nodes.
  Eigen::VectorXd harmonic(int k) const { return synthesis_.col(k); }
  double eigenvalue(int k) const;

  ScalarField apply_laplacian(const ScalarField& f) const override;
  bool has_spectral_calculus() const override { return true; }
  ScalarField apply_spectral_function(const ScalarField& f,
                                      const std::function<double(double)>& phi) const override;
  Eigen::VectorXd laplacian_spectrum() const override;
  double laplacian_norm_estimate() const override;
  Eigen::VectorXd node_coordinates(Eigen::Index i) const override;

  // Modal coefficients c with f = synthesis * c on polynomials of degree < N.
  Eigen::VectorXd analysis(const ScalarField& f) const;

 private:
  double radius_;
  Eigen::VectorXd x_, theta_;
  Eigen::MatrixXd synthesis_;  // scaled so synthesis^T W synthesis = I
};

// Uniform periodic product grid; the Laplacian is the sum of per-axis
// trigonometric second-derivative matrices applied fiber by fiber.
class TorusGridSpace final : public DiscreteSpace {
 public:
  TorusGridSpace(const ModelManifold& torus, int modes_per_axis);

  int modes_per_axis() const { return m_; }
  const std::vector<double>& lengths() const { return model().torus().lengths; }
  // Samples of cos(2 pi k x_axis / L_axis).
  ScalarField fourier_mode(int axis, int k) const;

  ScalarField apply_laplacian(const ScalarField& f) const override;
  bool has_spectral_calculus() const override { return true; }
  ScalarField apply_spectral_function(const ScalarField& f,
                                      const std::function<double(double)>& phi) const override;
  Eigen::VectorXd laplacian_spectrum() const override;
  double laplacian_norm_estimate() const override;
  Eigen::VectorXd node_coordinates(Eigen::Index i) const override;

 private:
  void apply_axis(const Eigen::MatrixXd& mat, int axis, const Eigen::VectorXd& in,
                  Eigen::VectorXd& out) const;
  int m_;
  std::vector<Eigen::MatrixXd> second_diff_;  // per axis, M x M, nonnegative
  std::vector<Eigen::MatrixXd> eigvec_;
  std::vector<Eigen::VectorXd> eigval_;
  Eigen::VectorXd mode_spectrum_;  // Laplacian symbol per transformed node
};

// Cotangent stiffness with lumped barycentric mass; Delta f = M^{-1} S f.
class TriMeshSpace final : public DiscreteSpace {
 public:
  explicit TriMeshSpace(const ModelManifold& mesh_model);

  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const Eigen::VectorXd& angle_sums() const { return angle_sums_; }
  int euler_characteristic() const { return model().mesh().euler_characteristic(); }

  ScalarField apply_laplacian(const ScalarField& f) const override;
  double laplacian_norm_estimate() const override;
  Eigen::VectorXd node_coordinates(Eigen::Index i) const override;

 private:
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::VectorXd angle_sums_;
  double norm_estimate_ = 0.0;
};

struct TorusOptions {
  std::size_t node_cap = std::size_t{1} << 18;
};

std::shared_ptr<const ZonalSphereSpace> build_zonal_sphere(int n, double radius, int node_count);
std::shared_ptr<const TorusGridSpace> build_torus(const std::vector<double>& lengths, int modes_per_axis,
                                                  TorusOptions opts = {});
std::shared_ptr<const TriMeshSpace> build_trimesh(const ModelManifold& mesh_model);

double integrate(const DiscreteSpace& space, const ScalarField& f);

// Weighted inner product sum_i w_i f_i g_i.
double inner(const DiscreteSpace& space, const ScalarField& f, const ScalarField& g);

// Per-vertex Gauss curvature from angle defects divided by the lumped area.
ScalarField angle_defect_curvature(const DiscreteSpace& space);

// Gauss-Gegenbauer rule for (1 - x^2)^alpha on [-1, 1] with the orthonormal
// polynomial table. Exposed for the sidecar cache and tests.
ZonalSphereSpace::Tables gegenbauer_tables(int n, int node_count);

// Transform-table sidecar files keyed by (backend, n, N) with a version byte.
namespace table_cache {
inline constexpr std::uint8_t kVersion = 1;
std::string file_name(Backend b, int n, int node_count);
// Empty directory disables caching. Defaults to $CONFSPEC_CACHE_DIR.
std::string default_directory();
std::optional<ZonalSphereSpace::Tables> load(const std::string& dir, int n, int node_count);
void store(const std::string& dir, int n, int node_count, const ZonalSphereSpace::Tables& t);
}  // namespace table_cache

// Mesh generators used by the 2-D pipeline.
namespace meshes {
TriMesh2D icosphere(int level, double radius = 1.0);
TriMesh2D ellipsoid(int level, const Eigen::Vector3d& axes);
// Periodic right-triangle grid of [0,lx) x [0,ly); geometry via corner overrides.
TriMesh2D flat_torus(int nx, int ny, double lx, double ly);
TriMesh2D torus_of_revolution(int nu, int nv, double major, double minor);
// Connected sum of two tori of revolution; chi = -2.
TriMesh2D genus_two(int nu = 24, int nv = 12);
}  // namespace meshes

}  // namespace confspec
