#include "bbem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace bbem {

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (vertices_.empty() || triangles_.empty()) throw MeshError("mesh has no vertices or panels");
  const int nv = static_cast<int>(vertices_.size());
  bbox_min_ = bbox_max_ = vertices_.front();
  for (const Vec3& v : vertices_) {
    if (!v.allFinite()) throw MeshError("mesh vertex is not finite");
    bbox_min_ = bbox_min_.cwiseMin(v);
    bbox_max_ = bbox_max_.cwiseMax(v);
  }
  scale_ = (bbox_max_ - bbox_min_).norm();

  const std::size_t np = triangles_.size();
  centroids_.resize(np);
  normals_.resize(np);
  areas_.resize(np);
  diameters_.resize(np);
  for (std::size_t p = 0; p < np; ++p) {
    for (int idx : triangles_[p])
      if (idx < 0 || idx >= nv) throw MeshError("panel references vertex out of range");
    const Vec3& a = vertices_[triangles_[p][0]];
    const Vec3& b = vertices_[triangles_[p][1]];
    const Vec3& c = vertices_[triangles_[p][2]];
    const Vec3 n = (b - a).cross(c - a);
    const double twice = n.norm();
    if (!(twice > 2e-14 * scale_ * scale_))
      throw MeshError("degenerate panel " + std::to_string(p));
    areas_[p] = 0.5 * twice;
    normals_[p] = n / twice;
    centroids_[p] = (a + b + c) / 3.0;
    diameters_[p] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  }
}

double SurfaceMesh::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

double SurfaceMesh::max_panel_diameter() const {
  return *std::max_element(diameters_.begin(), diameters_.end());
}

Vec3 SurfaceMesh::normal_balance() const {
  Vec3 s = Vec3::Zero();
  for (int p = 0; p < num_panels(); ++p) s += areas_[p] * normals_[p];
  return s;
}

bool SurfaceMesh::is_closed_and_oriented() const {
  // Directed edge -> use count. A closed oriented 2-manifold uses every
  // directed edge once and its reverse once.
  std::map<std::pair<int, int>, int> directed;
  for (const Triangle& t : triangles_)
    for (int k = 0; k < 3; ++k) {
      const int u = t[k], v = t[(k + 1) % 3];
      if (u == v) return false;
      if (++directed[{u, v}] > 1) return false;
    }
  for (const auto& [edge, n] : directed)
    if (directed.find({edge.second, edge.first}) == directed.end()) return false;
  return true;
}

void SurfaceMesh::require_closed() const {
  if (!is_closed_and_oriented()) throw MeshError("mesh is not closed and consistently oriented");
}

double SurfaceMesh::winding_number(const Vec3& x) const {
  // Van Oosterom-Strackee solid angle per panel.
  double total = 0.0;
  for (const Triangle& t : triangles_) {
    const Vec3 a = vertices_[t[0]] - x, b = vertices_[t[1]] - x, c = vertices_[t[2]] - x;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    total += 2.0 * std::atan2(num, den);
  }
  return total / kFourPi;
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Closest point by Voronoi-region classification.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return ap.norm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (p - (a + (d1 / (d1 - d3)) * ab)).norm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (p - (a + (d2 / (d2 - d6)) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return (p - (b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b))).norm();
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

double SurfaceMesh::distance_to_surface(const Vec3& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Triangle& t : triangles_)
    best = std::min(best, point_triangle_distance(x, vertices_[t[0]], vertices_[t[1]],
                                                  vertices_[t[2]]));
  return best;
}

void SurfaceMesh::orient_outward(const std::vector<Vec3>& vertices,
                                 std::vector<Triangle>& triangles, const Vec3& interior) {
  for (Triangle& t : triangles) {
    const Vec3& a = vertices[t[0]];
    const Vec3 n = (vertices[t[1]] - a).cross(vertices[t[2]] - a);
    const Vec3 c = (a + vertices[t[1]] + vertices[t[2]]) / 3.0;
    if (n.dot(c - interior) < 0) std::swap(t[1], t[2]);
  }
}

// ---------------------------------------------------------------------------

namespace {

void check_level(int level) {
  if (level < 0 || level > kMaxMeshLevel)
    throw MeshError("mesh level must be in [0, " + std::to_string(kMaxMeshLevel) + "], got " +
                    std::to_string(level));
}

}  // namespace

SurfaceMesh build_icosphere(int level, double radius) {
  check_level(level);
  if (!(radius > 0.0)) throw MeshError("icosphere radius must be positive");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& p : v) p.normalize();
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(4 * f.size());
    for (const Triangle& tri : f) {
      const int ab = mid(tri[0], tri[1]), bc = mid(tri[1], tri[2]), ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  for (Vec3& p : v) p *= radius;
  SurfaceMesh::orient_outward(v, f, Vec3::Zero());
  return SurfaceMesh(std::move(v), std::move(f));
}

SurfaceMesh build_cube(int level, double side) {
  check_level(level);
  if (!(side > 0.0)) throw MeshError("cube side must be positive");
  const int n = 1 << level;
  const double h = side / n;
  // Surface lattice points are keyed by integer coordinates so that faces
  // share their boundary vertices exactly.
  std::map<std::array<int, 3>, int> index;
  std::vector<Vec3> v;
  auto vertex = [&](std::array<int, 3> ijk) {
    auto it = index.find(ijk);
    if (it != index.end()) return it->second;
    v.emplace_back(ijk[0] * h - 0.5 * side, ijk[1] * h - 0.5 * side, ijk[2] * h - 0.5 * side);
    const int idx = static_cast<int>(v.size()) - 1;
    index.emplace(ijk, idx);
    return idx;
  };
  std::vector<Triangle> f;
  f.reserve(12 * n * n);
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3, w = (axis + 2) % 3;
    for (int fixed : {0, n}) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          std::array<int, 3> p00{}, p10{}, p01{}, p11{};
          for (auto* q : {&p00, &p10, &p01, &p11}) (*q)[axis] = fixed;
          p00[u] = a, p00[w] = b;
          p10[u] = a + 1, p10[w] = b;
          p01[u] = a, p01[w] = b + 1;
          p11[u] = a + 1, p11[w] = b + 1;
          const int i00 = vertex(p00), i10 = vertex(p10), i01 = vertex(p01), i11 = vertex(p11);
          // Alternate the diagonal so that the split is symmetric across the face.
          if ((a + b) % 2 == 0) {
            f.push_back({i00, i10, i11});
            f.push_back({i00, i11, i01});
          } else {
            f.push_back({i00, i10, i01});
            f.push_back({i10, i11, i01});
          }
        }
    }
  }
  SurfaceMesh::orient_outward(v, f, Vec3::Zero());
  return SurfaceMesh(std::move(v), std::move(f));
}

SurfaceMesh read_off(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return;
    }
    throw MeshError(std::string("OFF import: unexpected end of file while reading ") + what);
  };
  next_line("header");
  {
    std::istringstream hs(line);
    std::string magic;
    hs >> magic;
    if (magic != "OFF") throw MeshError("OFF import: first line must be 'OFF'");
  }
  next_line("counts");
  long nv = -1, nf = -1, ne = -1;
  {
    std::istringstream cs(line);
    if (!(cs >> nv >> nf >> ne) || nv <= 0 || nf <= 0)
      throw MeshError("OFF import: malformed count line '" + line + "'");
  }
  std::vector<Vec3> v(nv);
  for (long i = 0; i < nv; ++i) {
    next_line("vertices");
    std::istringstream vs(line);
    if (!(vs >> v[i][0] >> v[i][1] >> v[i][2]))
      throw MeshError("OFF import: malformed vertex line " + std::to_string(i));
  }
  std::vector<Triangle> f(nf);
  for (long i = 0; i < nf; ++i) {
    next_line("faces");
    std::istringstream fs(line);
    int k = 0;
    if (!(fs >> k)) throw MeshError("OFF import: malformed face line " + std::to_string(i));
    if (k != 3)
      throw MeshError("OFF import: face " + std::to_string(i) + " has " + std::to_string(k) +
                      " vertices; only triangles are supported");
    if (!(fs >> f[i][0] >> f[i][1] >> f[i][2]))
      throw MeshError("OFF import: malformed face line " + std::to_string(i));
  }
  return SurfaceMesh(std::move(v), std::move(f));
}

SurfaceMesh read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_off(in);
}

void write_off(std::ostream& out, const SurfaceMesh& mesh) {
  out << "OFF\n" << mesh.vertices().size() << ' ' << mesh.num_panels() << " 0\n";
  out.precision(17);
  for (const Vec3& p : mesh.vertices()) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  for (const Triangle& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

// ---------------------------------------------------------------------------

int PatchLabeling::count(PatchLabel which) const {
  return static_cast<int>(std::count(labels.begin(), labels.end(), which));
}

void PatchLabeling::require_mixed() const {
  if (num_dirichlet() == 0) throw InvalidLabeling("Dirichlet patch is empty");
  if (num_neumann() == 0) throw InvalidLabeling("Neumann patch is empty");
}

namespace {

std::string face_name(const Vec3& n) {
  int axis = 0;
  n.cwiseAbs().maxCoeff(&axis);
  return std::string(n[axis] > 0 ? "+" : "-") + "xyz"[axis];
}

}  // namespace

PatchLabeling label_patches(const SurfaceMesh& mesh, const PatchRule& rule) {
  PatchLabeling out;
  out.labels.resize(mesh.num_panels());
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        for (int p = 0; p < mesh.num_panels(); ++p) {
          if constexpr (std::is_same_v<R, PlaneRule>) {
            const PatchLabel other = r.positive_side == PatchLabel::Neumann ? PatchLabel::Dirichlet
                                                                            : PatchLabel::Neumann;
            out.labels[p] = r.normal.dot(mesh.centroid(p)) > r.offset ? r.positive_side : other;
          } else if constexpr (std::is_same_v<R, CubeFacesRule>) {
            out.labels[p] = r.neumann_faces.count(face_name(mesh.normal(p)))
                                ? PatchLabel::Neumann
                                : PatchLabel::Dirichlet;
          } else {
            out.labels[p] = r.label;
          }
        }
      },
      rule);
  return out;
}

}  // namespace bbem
