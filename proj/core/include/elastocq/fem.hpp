#pragma once

#include <functional>

#include "elastocq/bem.hpp"
#include "elastocq/materials.hpp"
#include "elastocq/spaces.hpp"

namespace elastocq {

/// P1 tetrahedral Galerkin blocks of the interior operator and the boundary
/// coupling.  Stiffness and mass use exact affine-element integration.
struct InteriorBlocks {
  MatX stiffness;  ///< (C eps(U), eps(V)), volume dofs
  MatX mass;       ///< (rho U, V), volume dofs
  MatX coupling;   ///< <mu, gamma- V>: P0 boundary rows, volume columns
};

InteriorBlocks assemble_interior(const VolumeMesh& volume, const SurfaceMesh& surface,
                                 const FunctionSpaces& spaces, const AnisotropicInterior& mat);

/// Load vector (F, V) with an order-2 tet rule.
VecXc assemble_load(const VolumeMesh& volume,
                    const std::function<Vec3c(const Vec3&)>& body_force);

/// <g, hat_v e_i>_Gamma for P1 boundary test functions (surface rule of the
/// given degree); used for <T+ Uinc, gamma- V>.
VecXc boundary_functional_p1(const SurfaceMesh& mesh,
                             const std::function<Vec3c(const Vec3&, const Vec3&)>& g,
                             int order = 6);
/// <psi_t e_i, g>_Gamma for P0 test functions; used for <mu, gamma+ Uinc>.
VecXc boundary_functional_p0(const SurfaceMesh& mesh,
                             const std::function<Vec3c(const Vec3&, const Vec3&)>& g,
                             int order = 6);

/// Frequency-weighted elastic energy |||u|||_{|s|}^2 = u* K u + |s|^2 u* M u.
double energy_norm_squared(const InteriorBlocks& blocks, const VecXc& u, cd s);

}  // namespace elastocq
