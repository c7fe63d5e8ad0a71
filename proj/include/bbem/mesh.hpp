#pragma once

#include "bbem/common.hpp"

#include <iosfwd>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace bbem {

using Triangle = std::array<int, 3>;

/// Closed, outward-oriented flat-triangle surface. Derived per-panel data is
/// computed once at construction; the mesh is immutable afterwards.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  int num_panels() const { return static_cast<int>(triangles_.size()); }
  int num_unknowns() const { return 3 * num_panels(); }

  const Vec3& vertex(int panel, int corner) const { return vertices_[triangles_[panel][corner]]; }
  const Vec3& centroid(int panel) const { return centroids_[panel]; }
  const Vec3& normal(int panel) const { return normals_[panel]; }
  double area(int panel) const { return areas_[panel]; }
  /// Longest edge of the panel.
  double diameter(int panel) const { return diameters_[panel]; }

  const std::vector<double>& areas() const { return areas_; }
  const std::vector<Vec3>& centroids() const { return centroids_; }
  const std::vector<Vec3>& normals() const { return normals_; }

  double total_area() const;
  /// Diameter of the vertex set's bounding box.
  double scale() const { return scale_; }
  double max_panel_diameter() const;
  Vec3 bbox_min() const { return bbox_min_; }
  Vec3 bbox_max() const { return bbox_max_; }

  /// Sum of area * normal; zero for a closed surface.
  Vec3 normal_balance() const;

  /// Every edge shared by exactly two panels with opposite orientation.
  bool is_closed_and_oriented() const;
  void require_closed() const;

  /// Generalized winding number of the surface around x (1 inside, 0 outside).
  double winding_number(const Vec3& x) const;
  bool contains(const Vec3& x) const { return winding_number(x) > 0.5; }

  /// Euclidean distance from x to the closest panel.
  double distance_to_surface(const Vec3& x) const;

  /// Flip triangles so that normals point away from `interior`.
  static void orient_outward(const std::vector<Vec3>& vertices, std::vector<Triangle>& triangles,
                             const Vec3& interior);

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> centroids_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  Vec3 bbox_min_ = Vec3::Zero();
  Vec3 bbox_max_ = Vec3::Zero();
  double scale_ = 0.0;
};

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Level 6 is the largest icosphere (81920 panels) that the builders accept.
inline constexpr int kMaxMeshLevel = 6;

/// Icosahedron subdivided `level` times with vertices projected to the sphere.
SurfaceMesh build_icosphere(int level, double radius = 1.0);

/// Axis-aligned cube centered at the origin; each face carries 2 * 4^level panels.
SurfaceMesh build_cube(int level, double side = 1.0);

/// OFF subset: "OFF", "<nv> <nf> 0", nv vertex lines, nf lines "3 i j k".
SurfaceMesh read_off(std::istream& in);
SurfaceMesh read_off_file(const std::string& path);
void write_off(std::ostream& out, const SurfaceMesh& mesh);

// ---------------------------------------------------------------------------
// Dirichlet / Neumann patches

enum class PatchLabel : unsigned char { Dirichlet, Neumann };

struct PatchLabeling {
  std::vector<PatchLabel> labels;

  int count(PatchLabel which) const;
  int num_dirichlet() const { return count(PatchLabel::Dirichlet); }
  int num_neumann() const { return count(PatchLabel::Neumann); }
  bool is_dirichlet(int panel) const { return labels[panel] == PatchLabel::Dirichlet; }
  /// Both patches are nonempty.
  bool is_mixed() const { return num_dirichlet() > 0 && num_neumann() > 0; }
  void require_mixed() const;
};

/// Panels whose centroid c satisfies normal . c > offset get `positive_side`.
struct PlaneRule {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
  PatchLabel positive_side = PatchLabel::Neumann;
};

/// Cube faces named "+x", "-x", ..., "-z" become Neumann, the rest Dirichlet.
struct CubeFacesRule {
  std::set<std::string> neumann_faces;
};

struct UniformRule {
  PatchLabel label = PatchLabel::Dirichlet;
};

using PatchRule = std::variant<PlaneRule, CubeFacesRule, UniformRule>;

PatchLabeling label_patches(const SurfaceMesh& mesh, const PatchRule& rule);

}  // namespace bbem
