#include "confspec/model_geometry.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include "confspec/errors.hpp"

namespace confspec {

std::array<Eigen::Vector3d, 3> TriMesh2D::corners(std::size_t t) const {
  if (!corner_override.empty()) return corner_override[t];
  const auto& tri = triangles[t];
  return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
}

int TriMesh2D::edge_count() const {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  return static_cast<int>(edges.size());
}

int TriMesh2D::euler_characteristic() const {
  return static_cast<int>(vertices.size()) - edge_count() + static_cast<int>(triangles.size());
}

void validate_closed_mesh(const TriMesh2D& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  if (nv < 4 || mesh.triangles.size() < 4) throw InvalidModel("mesh has too few elements to be closed");
  if (!mesh.corner_override.empty() && mesh.corner_override.size() != mesh.triangles.size())
    throw InvalidModel("corner override count does not match triangle count");

  std::map<std::pair<int, int>, int> directed;
  std::vector<int> used(nv, 0);
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv) throw InvalidModel("triangle references a missing vertex");
      used[t[k]] = 1;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw InvalidModel("triangle with repeated vertex");
    for (int k = 0; k < 3; ++k) {
      if (++directed[{t[k], t[(k + 1) % 3]}] > 1)
        throw InvalidModel("mesh is not consistently oriented or edge is non-manifold");
    }
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw InvalidModel("isolated vertex " + std::to_string(v));
  for (const auto& [edge, count] : directed) {
    if (!directed.count({edge.second, edge.first}))
      throw InvalidModel("mesh has a boundary edge (" + std::to_string(edge.first) + "," +
                         std::to_string(edge.second) + ")");
  }
  if (mesh.euler_characteristic() % 2 != 0) throw InvalidModel("odd Euler characteristic");
}

ModelManifold ModelManifold::round_sphere(int n, double radius) {
  if (n < 2) throw InvalidModel("sphere dimension must be >= 2");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidModel("sphere radius must be positive");
  return ModelManifold(RoundSphere{n, radius});
}

ModelManifold ModelManifold::flat_torus(std::vector<double> lengths) {
  if (lengths.size() < 2) throw InvalidModel("torus dimension must be >= 2");
  for (double l : lengths)
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidModel("torus side lengths must be positive");
  return ModelManifold(FlatTorus{std::move(lengths)});
}

ModelManifold ModelManifold::flat_torus(int n, double side) {
  if (n < 2) throw InvalidModel("torus dimension must be >= 2");
  return flat_torus(std::vector<double>(n, side));
}

ModelManifold ModelManifold::tri_mesh(TriMesh2D mesh) {
  validate_closed_mesh(mesh);
  return ModelManifold(std::move(mesh));
}

int ModelManifold::dimension() const {
  if (is_sphere()) return sphere().n;
  if (is_torus()) return torus().n();
  return 2;
}

double unit_sphere_volume(int n) {
  // |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
  const double a = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, a) / std::tgamma(a);
}

double ModelManifold::volume() const {
  if (is_sphere()) return unit_sphere_volume(sphere().n) * std::pow(sphere().radius, sphere().n);
  if (is_torus()) {
    double v = 1.0;
    for (double l : torus().lengths) v *= l;
    return v;
  }
  throw UnsupportedInput("closed-form volume is not available for triangle meshes");
}

std::string ModelManifold::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (is_sphere()) {
    os << "sphere:n=" << sphere().n << ",r=" << sphere().radius;
  } else if (is_torus()) {
    os << "torus:n=" << torus().n() << ",L=";
    for (std::size_t i = 0; i < torus().lengths.size(); ++i) os << (i ? "/" : "") << torus().lengths[i];
  } else {
    os << "mesh:V=" << mesh().vertices.size() << ",F=" << mesh().triangles.size()
       << ",chi=" << mesh().euler_characteristic();
  }
  return os.str();
}

CurvatureData curvature_from_invariants(int n, double scalar_R, double einstein_norm_sq) {
  if (n < 2) throw DimensionError("curvature data needs n >= 2");
  CurvatureData c;
  c.n = n;
  c.scalar_R = scalar_R;
  c.einstein_norm_sq = einstein_norm_sq;
  if (einstein_norm_sq == 0.0) c.ricci_coeff = scalar_R / n;
  if (n >= 3) {
    const double nm1 = n - 1.0, nm2 = n - 2.0;
    c.schouten_norm_sq = einstein_norm_sq / (nm2 * nm2) + scalar_R * scalar_R / (4.0 * n * nm1 * nm1);
    c.q_value = q_from_curvature(c);
  }
  return c;
}

CurvatureData model_curvature(const ModelManifold& m) {
  if (m.is_mesh()) throw UnsupportedInput("triangle-mesh curvature is computed by the discretization layer");
  if (m.is_torus()) {
    CurvatureData c;
    c.n = m.dimension();
    c.ricci_coeff = 0.0;
    if (c.n >= 3) {
      c.schouten_norm_sq = 0.0;
      c.q_value = 0.0;
    }
    return c;
  }
  const auto& s = m.sphere();
  const double r2 = s.radius * s.radius;
  CurvatureData c;
  c.n = s.n;
  c.scalar_R = s.n * (s.n - 1.0) / r2;
  c.ricci_coeff = (s.n - 1.0) / r2;
  if (s.n >= 3) {
    // Schouten of an Einstein metric is g/(2 r^2).
    c.schouten_norm_sq = s.n / (4.0 * r2 * r2);
    c.q_value = q_from_curvature(c);
  }
  return c;
}

double q_from_curvature(const CurvatureData& c) {
  if (c.n < 3) throw DimensionError("Q-curvature requires n >= 3");
  if (!c.schouten_norm_sq) throw InvalidModel("curvature data carries no Schouten norm");
  const double nm1 = c.n - 1.0;
  return c.n / (8.0 * nm1 * nm1) * c.scalar_R * c.scalar_R - 2.0 * *c.schouten_norm_sq;
}

double q_identity_dim4(const CurvatureData& c) {
  if (c.n != 4) throw DimensionError("the 24Q identity holds in dimension 4 only");
  const double q = c.q_value ? *c.q_value : q_from_curvature(c);
  return 24.0 * q - (c.scalar_R * c.scalar_R - 12.0 * c.einstein_norm_sq);
}

double paneitz_alpha(int n) {
  const double nm2 = n - 2.0;
  return (nm2 * nm2 + 4.0) / (2.0 * (n - 1.0) * nm2);
}

double paneitz_beta(int n) { return -4.0 / (n - 2.0); }

TriMesh2D read_off(std::istream& in) {
  auto next_line = [&](std::string& line) {
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  std::string line;
  if (!next_line(line)) throw InvalidModel("OFF: empty input");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw InvalidModel("OFF: missing magic header");
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv)) {
    if (!next_line(line)) throw InvalidModel("OFF: missing counts");
    header = std::istringstream(line);
    header >> nv;
  }
  header >> nf >> ne;
  if (nv <= 0 || nf <= 0) throw InvalidModel("OFF: invalid counts");

  TriMesh2D mesh;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_line(line)) throw InvalidModel("OFF: truncated vertex list");
    std::istringstream ls(line);
    Eigen::Vector3d p;
    if (!(ls >> p.x() >> p.y() >> p.z())) throw InvalidModel("OFF: malformed vertex line");
    mesh.vertices.push_back(p);
  }
  for (long i = 0; i < nf; ++i) {
    if (!next_line(line)) throw InvalidModel("OFF: truncated face list");
    std::istringstream ls(line);
    int k = 0;
    std::array<int, 3> t{};
    if (!(ls >> k) || k != 3) throw InvalidModel("OFF: only triangular faces are supported");
    if (!(ls >> t[0] >> t[1] >> t[2])) throw InvalidModel("OFF: malformed face line");
    mesh.triangles.push_back(t);
  }
  return mesh;
}

TriMesh2D read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidModel("cannot open OFF file: " + path);
  return read_off(in);
}

void write_off(std::ostream& out, const TriMesh2D& mesh) {
  out.precision(17);
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << ' ' << mesh.edge_count() << '\n';
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace confspec
