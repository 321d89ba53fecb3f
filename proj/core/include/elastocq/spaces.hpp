#pragma once

#include <vector>

#include "elastocq/mesh.hpp"

namespace elastocq {

/// Discrete spaces of the coupled problem and the index maps between them.
///
/// P1_volume: continuous piecewise-linear vector fields on the tet mesh
///            (interior displacement), dofs interleaved (3*vertex + comp).
/// P0_boundary: piecewise-constant vector fields on the surface triangles
///            (traction density), dofs 3*triangle + comp.
/// P1_boundary: continuous piecewise-linear vector fields on the surface
///            (trace density), dofs 3*surface_vertex + comp.
/// The P1 boundary dofs are exactly the traces of the P1 volume dofs: the
/// trace map is a pure index selection.
class FunctionSpaces {
public:
  FunctionSpaces(const SurfaceMesh& surface, const VolumeMesh& volume);

  int volume_dofs() const { return 3 * nv_vol_; }
  int p0_dofs() const { return 3 * nt_; }
  int p1_dofs() const { return 3 * nv_bnd_; }

  /// surface vertex -> volume vertex
  int boundary_to_volume(int bnd_vertex) const { return bnd2vol_[bnd_vertex]; }
  /// volume vertex -> surface vertex or -1
  int volume_to_boundary(int vol_vertex) const { return vol2bnd_[vol_vertex]; }

  /// restrict volume coefficients to boundary coefficients (index selection)
  VecXc trace(const VecXc& volume_coeffs) const;
  /// scatter boundary coefficients into a zero-extended volume vector
  VecXc extend_by_zero(const VecXc& boundary_coeffs) const;

private:
  int nv_vol_ = 0, nv_bnd_ = 0, nt_ = 0;
  std::vector<int> bnd2vol_, vol2bnd_;
};

}  // namespace elastocq
