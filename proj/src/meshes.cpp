#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "confspec/discretization.hpp"
#include "confspec/errors.hpp"

namespace confspec::meshes {

TriMesh2D icosphere(int level, double radius) {
  if (level < 0) throw InvalidModel("icosphere level must be >= 0");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh2D m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : m.vertices) v.normalize();

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const int idx = static_cast<int>(m.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& tri : m.triangles) {
      const int a = mid(tri[0], tri[1]), b = mid(tri[1], tri[2]), c = mid(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    m.triangles = std::move(next);
  }
  for (auto& v : m.vertices) v *= radius;
  return m;
}

TriMesh2D ellipsoid(int level, const Eigen::Vector3d& axes) {
  TriMesh2D m = icosphere(level, 1.0);
  for (auto& v : m.vertices) v = v.cwiseProduct(axes);
  return m;
}

namespace {

// Two triangles per grid cell, vertex (i, j) at index i + nx * j.
void grid_triangles(int nx, int ny, TriMesh2D& m, std::vector<std::array<int, 4>>* cells = nullptr) {
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = i + nx * j, v10 = (i + 1) % nx + nx * j;
      const int v01 = i + nx * ((j + 1) % ny), v11 = (i + 1) % nx + nx * ((j + 1) % ny);
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
      if (cells) cells->push_back({v00, v10, v11, v01});
    }
}

}  // namespace

TriMesh2D flat_torus(int nx, int ny, double lx, double ly) {
  if (nx < 3 || ny < 3) throw InvalidModel("flat torus grid needs at least 3 cells per axis");
  TriMesh2D m;
  const double hx = lx / nx, hy = ly / ny;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.vertices.emplace_back(i * hx, j * hy, 0.0);
  grid_triangles(nx, ny, m);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Eigen::Vector3d p00(i * hx, j * hy, 0), p10((i + 1) * hx, j * hy, 0);
      const Eigen::Vector3d p01(i * hx, (j + 1) * hy, 0), p11((i + 1) * hx, (j + 1) * hy, 0);
      m.corner_override.push_back({p00, p10, p11});
      m.corner_override.push_back({p00, p11, p01});
    }
  return m;
}

TriMesh2D torus_of_revolution(int nu, int nv, double major, double minor) {
  if (nu < 3 || nv < 3) throw InvalidModel("torus of revolution needs at least 3 cells per direction");
  TriMesh2D m;
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      const double u = 2.0 * std::numbers::pi * i / nu, v = 2.0 * std::numbers::pi * j / nv;
      m.vertices.emplace_back((major + minor * std::cos(v)) * std::cos(u),
                              (major + minor * std::cos(v)) * std::sin(u), minor * std::sin(v));
    }
  grid_triangles(nu, nv, m);
  return m;
}

TriMesh2D genus_two(int nu, int nv) {
  const double major = 2.0, minor = 0.7, offset = 2.0 * (major + minor) + 1.0;
  TriMesh2D a = torus_of_revolution(nu, nv, major, minor);
  const int na = static_cast<int>(a.vertices.size());

  // Cell around u = 0 on the outer equator faces +x; the copy's cell around
  // u = pi faces -x. Each cell is the triangle pair emitted for (i, 0).
  const int cell_a = nu - 1;
  const int cell_b = nu / 2 - 1;
  auto quad = [&](int cell, int shift) {
    const int i = cell, i1 = (cell + 1) % nu;
    return std::array<int, 4>{i + shift, i1 + shift, i1 + nu + shift, i + nu + shift};
  };
  const auto qa = quad(cell_a, 0);
  const auto qb = quad(cell_b, na);

  TriMesh2D m;
  m.vertices = a.vertices;
  for (const auto& v : a.vertices) m.vertices.push_back(v + Eigen::Vector3d(offset, 0, 0));
  for (std::size_t t = 0; t < a.triangles.size(); ++t) {
    if (static_cast<int>(t / 2) == cell_a) continue;
    m.triangles.push_back(a.triangles[t]);
  }
  for (std::size_t t = 0; t < a.triangles.size(); ++t) {
    if (static_cast<int>(t / 2) == cell_b) continue;
    auto tri = a.triangles[t];
    for (int& v : tri) v += na;
    m.triangles.push_back(tri);
  }

  // Tube quad k joins edge qa[k]->qa[k+1] with qb[s-k-1]->qb[s-k]; pick the
  // rotation s that pairs geometrically nearby vertices.
  int best_s = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 4; ++s) {
    double d = 0.0;
    for (int k = 0; k < 4; ++k) d += (m.vertices[qa[k]] - m.vertices[qb[((s - k) % 4 + 4) % 4]]).norm();
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  for (int k = 0; k < 4; ++k) {
    const int a0 = qa[k], a1 = qa[(k + 1) % 4];
    const int b0 = qb[((best_s - k - 1) % 4 + 4) % 4], b1 = qb[((best_s - k) % 4 + 4) % 4];
    m.triangles.push_back({a0, a1, b0});
    m.triangles.push_back({a0, b0, b1});
  }
  return m;
}

}  // namespace confspec::meshes
