#include "elastocq/spaces.hpp"

namespace elastocq {

FunctionSpaces::FunctionSpaces(const SurfaceMesh& surface, const VolumeMesh& volume)
    : nv_vol_(volume.num_vertices()), nv_bnd_(surface.num_vertices()),
      nt_(surface.num_triangles()) {
  bnd2vol_.assign(nv_bnd_, -1);
  vol2bnd_.assign(nv_vol_, -1);
  for (const auto& bf : volume.boundary_faces) {
    const auto& tri = surface.triangles[bf.surface_triangle];
    // find the rotation that matches the face to the surface triangle
    int rot = -1;
    for (int r = 0; r < 3 && rot < 0; ++r) {
      bool ok = true;
      for (int c = 0; c < 3; ++c) {
        const Vec3 dv = volume.vertices[bf.v[(c + r) % 3]] - surface.vertices[tri[c]];
        if (dv.norm() > 1e-12 * std::max(1.0, surface.diameters[bf.surface_triangle])) ok = false;
      }
      if (ok) rot = r;
    }
    if (rot < 0)
      throw MeshValidationError("boundary face / surface triangle mismatch",
                                bf.surface_triangle);
    for (int c = 0; c < 3; ++c) {
      const int vv = bf.v[(c + rot) % 3];
      const int sv = tri[c];
      if (vol2bnd_[vv] != -1 && vol2bnd_[vv] != sv)
        throw MeshValidationError("volume vertex maps to two surface vertices", vv);
      if (bnd2vol_[sv] != -1 && bnd2vol_[sv] != vv)
        throw MeshValidationError("surface vertex maps to two volume vertices", sv);
      vol2bnd_[vv] = sv;
      bnd2vol_[sv] = vv;
    }
  }
  for (int s = 0; s < nv_bnd_; ++s)
    if (bnd2vol_[s] < 0)
      throw MeshValidationError("surface vertex has no volume counterpart", s);
}

VecXc FunctionSpaces::trace(const VecXc& volume_coeffs) const {
  VecXc out(p1_dofs());
  for (int s = 0; s < nv_bnd_; ++s)
    out.segment<3>(3 * s) = volume_coeffs.segment<3>(3 * bnd2vol_[s]);
  return out;
}

VecXc FunctionSpaces::extend_by_zero(const VecXc& boundary_coeffs) const {
  VecXc out = VecXc::Zero(volume_dofs());
  for (int s = 0; s < nv_bnd_; ++s)
    out.segment<3>(3 * bnd2vol_[s]) = boundary_coeffs.segment<3>(3 * s);
  return out;
}

}  // namespace elastocq
