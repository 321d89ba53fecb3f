#pragma once

#include "elastocq/coupled.hpp"
#include "elastocq/cq.hpp"

namespace elastocq {

/// Exact transmission solution built from two point sources: the exterior
/// field radiates from y0 inside the scatterer, the interior field from y1
/// outside it, so both satisfy their homogeneous equations in the regions
/// where they are used.  The transmission data is the mismatch of traces and
/// tractions; the exact solution triplet follows in closed form.
class ManufacturedLaplace {
public:
  ManufacturedLaplace(cd s, const IsotropicExterior& exterior,
                      const IsotropicExterior& interior_iso, const Vec3& y0, const Vec3& y1,
                      const Vec3& q0, const Vec3& q1, const SurfaceMesh& mesh);

  Vec3c u_plus(const Vec3& x) const;
  Vec3c u_minus(const Vec3& x) const;
  Vec3c traction_plus(const Vec3& x, const Vec3& n) const;
  Vec3c traction_minus(const Vec3& x, const Vec3& n) const;

  /// gamma+ Uinc := gamma- U-  -  gamma+ U+
  Vec3c trace_datum(const Vec3& x) const;
  /// T+ Uinc := T- U-  -  T+ U+
  Vec3c traction_datum(const Vec3& x, const Vec3& n) const;

  /// data functionals assembled for the coupled system
  TransmissionData data(const CoupledAssembler& assembler) const;

  VecXc lambda_exact(const SurfaceMesh& mesh) const;  ///< P0 interpolant of T+ U+
  VecXc phi_exact(const SurfaceMesh& mesh, Formulation f) const;
  VecXc u_exact(const VolumeMesh& volume) const;

  cd s() const { return s_; }
  bool conditioning_warning() const { return warning_; }

private:
  cd s_;
  KupradzeKernel ext_, int_;
  Vec3 y0_, y1_, q0_, q1_;
  bool warning_ = false;
};

/// Retarded field of a point force with a smooth causal signature: the
/// time-domain counterpart of the fundamental solution, evaluated from the
/// classical closed form (near-field integral by Gauss quadrature).
class TransientPointSource {
public:
  TransientPointSource(const IsotropicExterior& mat, const Vec3& source, const Vec3& charge,
                       Signature signature, int quad_order = 24);

  Vec3 displacement(const Vec3& x, double t) const;
  Mat3 displacement_gradient(const Vec3& x, double t) const;  ///< (i,k) = d_k u_i
  Vec3 traction(const Vec3& x, double t, const Vec3& n) const;

private:
  IsotropicExterior mat_;
  Vec3 y_, q_;
  Signature sig_;
  std::vector<double> gx_, gw_;
};

}  // namespace elastocq
