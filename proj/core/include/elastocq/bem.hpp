#pragma once

#include <optional>

#include "elastocq/kernels.hpp"
#include "elastocq/mesh.hpp"
#include "elastocq/quadrature.hpp"

namespace elastocq {

/// Dense Galerkin matrices of the four boundary integral operators at one
/// Laplace parameter.  Dofs are interleaved: P0 dof = 3*triangle + comp,
/// P1 dof = 3*vertex + comp.  V and W are symmetric (bilinear pairing),
/// Kp == K^T exactly (assembled once and transposed).
struct BoundaryOperatorSet {
  MatXc V;   ///< single layer, P0 x P0
  MatXc K;   ///< double layer, P0 rows, P1 columns
  MatXc Kp;  ///< adjoint double layer, P1 rows, P0 columns
  MatXc W;   ///< hypersingular (weak form), P1 x P1
  cd s{};
};

struct BemOptions {
  int regular_order = 4;   ///< triangle rule degree for well-separated pairs
  int near_order = 8;      ///< doubled degree for close disjoint pairs
  int singular_order = 4;  ///< Gauss points per axis of the 4D singular rules
  bool parallel = true;
};

/// P0 x P1 pairing <psi_t e_i, hat_v e_j>_Gamma (block-diagonal in components).
MatX boundary_mass_p0_p1(const SurfaceMesh& mesh);
/// P1 x P1 surface mass matrix.
MatX boundary_mass_p1(const SurfaceMesh& mesh);
/// P0 diagonal mass (triangle areas, repeated per component).
VecX boundary_mass_p0(const SurfaceMesh& mesh);

/// Assembles V, K, K', W for one frequency.  The elastostatic part of W is
/// cached on first use so repeated frequencies pay only for the weakly
/// singular dynamic remainder.
class BemAssembler {
public:
  BemAssembler(const SurfaceMesh& mesh, const IsotropicExterior& mat, BemOptions opts = {});

  BoundaryOperatorSet assemble(cd s) const;

  const SurfaceMesh& mesh() const { return *mesh_; }
  const KupradzeKernel& kernel() const { return kernel_; }
  const BemOptions& options() const { return opts_; }
  /// Galerkin matrix of the elastostatic hypersingular operator (real),
  /// assembled via the symmetric-difference regularized bilinear form.
  const MatX& static_hypersingular() const;

private:
  const SurfaceMesh* mesh_;
  KupradzeKernel kernel_;
  BemOptions opts_;
  mutable std::optional<MatX> w_static_;
};

BoundaryOperatorSet assemble_operators(const SurfaceMesh& mesh, cd s,
                                       const IsotropicExterior& mat, BemOptions opts = {});

/// Off-surface evaluation of the layer potentials with recursive near-panel
/// subdivision.  `near_warning` (when supplied) is set if x is within 0.1
/// panel diameters of the surface, where accuracy degrades.
class PotentialEvaluator {
public:
  PotentialEvaluator(const SurfaceMesh& mesh, const IsotropicExterior& mat,
                     int base_order = 4, int max_refine_depth = 6);

  Vec3c single(const VecXc& p0_density, const Vec3& x, cd s,
               bool* near_warning = nullptr) const;
  Vec3c double_layer(const VecXc& p1_density, const Vec3& x, cd s,
                     bool* near_warning = nullptr) const;
  /// traction of S(s)Lambda at x, with respect to the given normal direction
  Vec3c traction_single(const VecXc& p0_density, const Vec3& x, cd s, const Vec3& n) const;
  Vec3c traction_double(const VecXc& p1_density, const Vec3& x, cd s, const Vec3& n) const;

  double distance_to_surface(const Vec3& x) const;
  const KupradzeKernel& kernel() const { return kernel_; }

private:
  const SurfaceMesh* mesh_;
  KupradzeKernel kernel_;
  TriangleRule rule_;
  int max_depth_;
};

/// Probe-extrapolated jump measurements for the single layer potential:
/// trace jump  [gamma S Lambda]  (exact value 0) and traction jump defect
/// [T S Lambda] - Lambda (exact value 0), as area-weighted relative L2 norms.
struct JumpTestResult {
  double trace_jump = 0;
  double traction_defect = 0;
};
JumpTestResult jump_test_single(const BemAssembler& assembler, const VecXc& lambda, cd s);

/// Double layer: trace jump defect [gamma D Phi] + Phi (exact 0) and traction
/// jump [T D Phi] (exact 0).
struct JumpTestDoubleResult {
  double trace_defect = 0;
  double traction_jump = 0;
};
JumpTestDoubleResult jump_test_double(const BemAssembler& assembler, const VecXc& phi, cd s);

/// Galerkin residuals of the one-sided trace/traction identities
///   T^{+-} S = (-+ 1/2 I + K') ,  gamma^{+-} D = (+- 1/2 I + K):
/// relative residual per identity and side.
struct AverageIdentityResult {
  double traction_exterior = 0, traction_interior = 0;  // against (-+1/2 I + K')Lambda
  double trace_exterior = 0, trace_interior = 0;        // against (+-1/2 I + K)Phi
};
AverageIdentityResult average_identities_test(const BemAssembler& assembler,
                                              const BoundaryOperatorSet& ops,
                                              const VecXc& lambda, const VecXc& phi, cd s);

}  // namespace elastocq
