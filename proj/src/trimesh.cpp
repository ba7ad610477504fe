#include <Eigen/Geometry>
#include <cmath>
#include <numbers>

#include "confspec/discretization.hpp"
#include "confspec/errors.hpp"

namespace confspec {

TriMeshSpace::TriMeshSpace(const ModelManifold& mesh_model)
    : DiscreteSpace(Backend::TriMesh, 2, mesh_model) {
  const auto& mesh = model().mesh();
  const Eigen::Index nv = static_cast<Eigen::Index>(mesh.vertices.size());
  const std::size_t nf = mesh.triangles.size();

  std::vector<double> areas(nf);
  double mean_area = 0.0;
  for (std::size_t t = 0; t < nf; ++t) {
    const auto p = mesh.corners(t);
    areas[t] = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
    mean_area += areas[t];
  }
  mean_area /= static_cast<double>(nf);
  for (std::size_t t = 0; t < nf; ++t)
    if (!(areas[t] > 1e-12 * mean_area))
      throw DegenerateMesh("triangle " + std::to_string(t) + " has area " + std::to_string(areas[t]));

  weights_ = Eigen::VectorXd::Zero(nv);
  angle_sums_ = Eigen::VectorXd::Zero(nv);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(nf * 12);
  for (std::size_t t = 0; t < nf; ++t) {
    const auto& tri = mesh.triangles[t];
    const auto p = mesh.corners(t);
    for (int k = 0; k < 3; ++k) {
      const int i = tri[(k + 1) % 3], j = tri[(k + 2) % 3];
      const Eigen::Vector3d e1 = p[(k + 1) % 3] - p[k];
      const Eigen::Vector3d e2 = p[(k + 2) % 3] - p[k];
      const double cross = e1.cross(e2).norm();
      const double dot = e1.dot(e2);
      angle_sums_[tri[k]] += std::atan2(cross, dot);
      // Half cotangent of the corner angle couples the opposite edge (i, j).
      const double w = 0.5 * dot / cross;
      trip.emplace_back(i, j, -w);
      trip.emplace_back(j, i, -w);
      trip.emplace_back(i, i, w);
      trip.emplace_back(j, j, w);
      weights_[tri[k]] += areas[t] / 3.0;
    }
  }
  stiffness_.resize(nv, nv);
  stiffness_.setFromTriplets(trip.begin(), trip.end());

  for (Eigen::Index i = 0; i < nv; ++i) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_, i); it; ++it) row += std::abs(it.value());
    norm_estimate_ = std::max(norm_estimate_, row / weights_[i]);
  }
}

ScalarField TriMeshSpace::apply_laplacian(const ScalarField& f) const {
  check_field(f);
  // Edge differences, so constants map to exactly zero.
  ScalarField out = ScalarField::Zero(f.size());
  for (Eigen::Index j = 0; j < stiffness_.outerSize(); ++j) {
    double acc = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_, j); it; ++it)
      if (it.row() != j) acc -= it.value() * (f[j] - f[it.row()]);
    out[j] = acc / weights_[j];
  }
  return out;
}

double TriMeshSpace::laplacian_norm_estimate() const { return norm_estimate_; }

Eigen::VectorXd TriMeshSpace::node_coordinates(Eigen::Index i) const {
  return model().mesh().vertices[static_cast<std::size_t>(i)];
}

std::shared_ptr<const TriMeshSpace> build_trimesh(const ModelManifold& mesh_model) {
  if (!mesh_model.is_mesh()) throw UnsupportedInput("build_trimesh expects a triangle-mesh model");
  return std::make_shared<const TriMeshSpace>(mesh_model);
}

ScalarField angle_defect_curvature(const DiscreteSpace& space) {
  const auto* mesh = dynamic_cast<const TriMeshSpace*>(&space);
  if (!mesh) throw UnsupportedInput("angle-defect curvature needs the trimesh backend");
  const Eigen::VectorXd defect = (2.0 * std::numbers::pi - mesh->angle_sums().array()).matrix();
  return defect.cwiseQuotient(mesh->quad_weights());
}

}  // namespace confspec
