#pragma once

#include <array>
#include <string>
#include <vector>

#include "elastocq/types.hpp"

namespace elastocq {

/// Oriented watertight triangulation of the interface; normals point into the
/// unbounded exterior.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  // derived, filled by finalize()
  std::vector<Vec3> normals;
  std::vector<double> areas;
  std::vector<Vec3> centroids;
  std::vector<double> diameters;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  double total_area() const;
  double enclosed_volume() const;  ///< divergence-theorem volume sum (x.n) area / 3

  /// Computes derived data and checks all invariants (watertight, consistent
  /// orientation, outward normals, nondegenerate elements).
  void finalize();

  std::array<Vec3, 3> triangle_vertices(int t) const {
    return {vertices[triangles[t][0]], vertices[triangles[t][1]], vertices[triangles[t][2]]};
  }
};

/// Tetrahedralization of the interior with an explicit correspondence between
/// its boundary faces and the surface triangulation.
struct VolumeMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  /// boundary face k: three volume vertex indices + the matching surface triangle
  struct BoundaryFace {
    std::array<int, 3> v;
    int surface_triangle;
  };
  std::vector<BoundaryFace> boundary_faces;

  std::vector<double> volumes;  // filled by finalize()

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }
  double total_volume() const;

  /// Checks positive volumes and that boundary faces are exactly the once-used
  /// faces of the tet mesh and match the surface mesh vertex-for-vertex.
  void finalize(const SurfaceMesh& surface);
};

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Subdivided icosahedron projected to the sphere. level 0: 20 triangles.
SurfaceMesh icosphere(int level, double radius = 1.0);

/// Layered tet mesh of the ball whose boundary matches icosphere(level,radius)
/// index-for-index (surface vertex i == volume vertex i).
VolumeMesh ball_mesh(int level, double radius = 1.0);

SurfaceMesh load_surface_mesh(const std::string& path);
VolumeMesh load_volume_mesh(const std::string& path, const SurfaceMesh& surface);
void save_surface_mesh(const SurfaceMesh& mesh, const std::string& path);
void save_volume_mesh(const VolumeMesh& mesh, const std::string& path);

}  // namespace elastocq
