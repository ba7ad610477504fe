#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace confspec {

struct RoundSphere {
  int n = 2;
  double radius = 1.0;
};

struct FlatTorus {
  std::vector<double> lengths;  // one side length per axis
  int n() const { return static_cast<int>(lengths.size()); }
};

// Closed triangulated surface. Periodic meshes (flat tori) cannot be embedded
// isometrically, so a triangle may carry its own corner coordinates; geometry
// is always read through corners().
struct TriMesh2D {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<Eigen::Vector3d, 3>> corner_override;  // empty or one per triangle

  std::array<Eigen::Vector3d, 3> corners(std::size_t t) const;
  int edge_count() const;
  int euler_characteristic() const;
};

// Throws InvalidModel unless every edge is shared by exactly two consistently
// oriented triangles and V - E + F is even.
void validate_closed_mesh(const TriMesh2D& mesh);

class ModelManifold {
 public:
  using Kind = std::variant<RoundSphere, FlatTorus, TriMesh2D>;

  static ModelManifold round_sphere(int n, double radius);
  static ModelManifold flat_torus(std::vector<double> lengths);
  static ModelManifold flat_torus(int n, double side);
  static ModelManifold tri_mesh(TriMesh2D mesh);

  const Kind& kind() const { return kind_; }
  int dimension() const;
  bool is_sphere() const { return std::holds_alternative<RoundSphere>(kind_); }
  bool is_torus() const { return std::holds_alternative<FlatTorus>(kind_); }
  bool is_mesh() const { return std::holds_alternative<TriMesh2D>(kind_); }
  const RoundSphere& sphere() const { return std::get<RoundSphere>(kind_); }
  const FlatTorus& torus() const { return std::get<FlatTorus>(kind_); }
  const TriMesh2D& mesh() const { return std::get<TriMesh2D>(kind_); }

  // Closed-form Riemannian volume (spheres and tori only).
  double volume() const;
  std::string describe() const;

 private:
  explicit ModelManifold(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

// Volume of the unit n-sphere S^n in R^{n+1}.
double unit_sphere_volume(int n);

// Pointwise curvature invariants of a constant-curvature model. Schouten and Q
// are undefined for surfaces and left empty there.
struct CurvatureData {
  int n = 0;
  double scalar_R = 0.0;
  std::optional<double> ricci_coeff;  // Ric = c g, Einstein models only
  std::optional<double> schouten_norm_sq;
  double einstein_norm_sq = 0.0;
  std::optional<double> q_value;
  double weyl_norm_sq = 0.0;

  bool is_einstein() const { return ricci_coeff.has_value() && einstein_norm_sq == 0.0; }
};

CurvatureData model_curvature(const ModelManifold& m);

// Builds consistent data for constant-R input with a prescribed |E|^2, using
// |S|^2 = |E|^2/(n-2)^2 + R^2/(4n(n-1)^2).
CurvatureData curvature_from_invariants(int n, double scalar_R, double einstein_norm_sq);

// Q = n/(8(n-1)^2) R^2 - 2|S|^2 (the Laplacian of R vanishes on the models).
double q_from_curvature(const CurvatureData& c);

// 24 Q - (R^2 - 12|E|^2); zero for every four-dimensional input.
double q_identity_dim4(const CurvatureData& c);

// Paneitz coefficients alpha_n and beta_n.
double paneitz_alpha(int n);
double paneitz_beta(int n);

// ASCII OFF reader/writer for TriMesh2D.
TriMesh2D read_off(std::istream& in);
TriMesh2D read_off_file(const std::string& path);
void write_off(std::ostream& out, const TriMesh2D& mesh);

}  // namespace confspec
