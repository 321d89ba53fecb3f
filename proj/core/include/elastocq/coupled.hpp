#pragma once

#include "elastocq/bem.hpp"
#include "elastocq/fem.hpp"
#include "elastocq/frequency.hpp"

namespace elastocq {

enum class Formulation { direct, alternative };

const char* to_string(Formulation f);

/// Right-hand-side functionals of the transmission problem for one frequency:
/// everything the assembled system needs to know about (F, T+ Uinc, gamma+ Uinc).
struct TransmissionData {
  VecXc volume_load;   ///< (F, V), volume dofs
  VecXc traction_p1;   ///< <T+ Uinc, hat_v e_i> on the boundary P1 dofs
  VecXc trace_p0;      ///< <psi_t e_i, gamma+ Uinc> on the P0 dofs
};

/// Dense block system over (U-, Lambda, Phi) for one frequency.
struct BlockSystem {
  Formulation formulation = Formulation::direct;
  cd s{};
  int n_u = 0, n_lambda = 0, n_phi = 0;
  MatXc A;
  VecXc rhs;

  int offset_u() const { return 0; }
  int offset_lambda() const { return n_u; }
  int offset_phi() const { return n_u + n_lambda; }
  int size() const { return n_u + n_lambda + n_phi; }
};

struct LaplaceSolution {
  Formulation formulation = Formulation::direct;
  cd s{};
  VecXc u_minus, lambda, phi;
  double residual = 0.0;
  double condition_estimate = 0.0;  ///< reciprocal condition estimate from the LU
};

/// Assembles and solves the coupled interior/boundary systems for a fixed
/// geometry; interior blocks and the static hypersingular part are built once
/// and reused across frequencies.
class CoupledAssembler {
public:
  CoupledAssembler(const SurfaceMesh& surface, const VolumeMesh& volume,
                   const IsotropicExterior& exterior, const AnisotropicInterior& interior,
                   BemOptions opts = {});

  BoundaryOperatorSet boundary_operators(cd s) const { return bem_.assemble(s); }

  BlockSystem build(Formulation f, const BoundaryOperatorSet& ops,
                    const TransmissionData& data) const;
  BlockSystem assemble_direct(cd s, const TransmissionData& data) const;
  BlockSystem assemble_alternative(cd s, const TransmissionData& data) const;

  const FunctionSpaces& spaces() const { return spaces_; }
  const InteriorBlocks& interior_blocks() const { return fem_; }
  const BemAssembler& bem() const { return bem_; }
  const SurfaceMesh& surface() const { return *surface_; }
  const VolumeMesh& volume() const { return *volume_; }
  const IsotropicExterior& exterior_material() const { return ext_; }
  const MatX& coupling_mass() const { return bmass_; }  ///< P0 x P1 pairing

  TransmissionData zero_data() const;

private:
  const SurfaceMesh* surface_;
  const VolumeMesh* volume_;
  IsotropicExterior ext_;
  FunctionSpaces spaces_;
  BemAssembler bem_;
  InteriorBlocks fem_;
  MatX bmass_;
};

LaplaceSolution solve(const BlockSystem& system);

/// Representation formula at a point: D(s)Phi - S(s)Lambda for the direct
/// formulation, s^{-1} D(s)Phi - S(s)Lambda for the alternative one.  For x
/// inside the scatterer the representation extends by (near) zero; `inside`
/// reports which case applied.
struct FieldSample {
  Vec3c value;
  bool inside = false;
  bool near_surface = false;
};
FieldSample exterior_field(const LaplaceSolution& sol, const CoupledAssembler& assembler,
                           const Vec3& x);

/// point-in-volume test by winding number (sum of signed solid angles)
bool point_inside(const SurfaceMesh& mesh, const Vec3& x);

/// Random-draw positivity/ellipticity probe of the boundary block
/// B0 = [[s V, -K], [K', s^{-1} W]] and the FEM-block energy identity
/// Re[conj(s) a(u, conj u)] = sigma |||u|||_{|s|}^2.
struct EllipticityProbe {
  double min_re_b0 = 0;       ///< min over draws of Re<B0(L,P), conj(L,P)>, unit draws
  double max_lhs_over_rhs = 0;  ///< calibration constant of the coercivity bound
  double fem_identity_error = 0;  ///< worst relative defect of the energy identity
};
EllipticityProbe ellipticity_probe(const BoundaryOperatorSet& ops, const InteriorBlocks& fem,
                                   const SurfaceMesh& mesh, cd s, int draws, unsigned seed);

}  // namespace elastocq
