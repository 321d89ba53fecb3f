#pragma once

#include <array>
#include <functional>

#include "elastocq/materials.hpp"
#include "elastocq/types.hpp"

namespace elastocq {

/// Radial factors of the displacement Green tensor
///   E(x,y;s) = A(r) I + B(r) rhat rhat^T,   r = |x-y|, rhat = (x-y)/r,
/// together with the radial derivatives needed for the traction and
/// hypersingular kernels.  All fields are derivatives with respect to r.
struct RadialScalars {
  cd A, B, Ap, Bp, App, Bpp;
  double r;
};

/// G[k](i,j) = d/d(x_k) E_ij, derivatives taken in delta = x - y.
using GradTensor = std::array<Mat3c, 3>;
/// T4[(a*3+b)](i,j) = d^2/(d delta_a d delta_b) E_ij.
using SecondTensor = std::array<Mat3c, 9>;

/// Cancellation-safe evaluator of the Laplace-domain elastodynamic
/// fundamental solution
///   E(x,y;s) = e^{-s r/c_s}/(4 pi mu r) I
///            + (1/(rho s^2)) grad grad^T [ (e^{-s r/c_p} - e^{-s r/c_s})/(4 pi r) ],
/// its first and second spatial derivatives, the traction kernel, and the
/// dynamic-minus-static kernels used by the hypersingular assembly.
///
/// A Taylor branch in w = s r takes over when |s| r / c_s drops below
/// series_threshold; above it, the exponential differences are evaluated
/// through complex expm1 factorizations so the two branches overlap to
/// ~1e-13 relative.
class KupradzeKernel {
public:
  static constexpr double series_threshold = 1e-2;

  explicit KupradzeKernel(const IsotropicExterior& mat);

  const IsotropicExterior& material() const { return mat_; }

  RadialScalars scalars(double r, cd s) const;
  RadialScalars static_scalars(double r) const;  ///< Kelvin (s -> 0) limit
  RadialScalars delta_scalars(double r, cd s) const;  ///< dynamic minus static

  /// E(x,y;s); throws if x == y or Re s <= 0.
  Mat3c fundamental(const Vec3& x, const Vec3& y, cd s) const;
  GradTensor gradient(const Vec3& x, const Vec3& y, cd s) const;

  /// Column j = traction at y (normal ny, exterior material) of the j-th
  /// column of E(x, .).
  Mat3c traction(const Vec3& x, const Vec3& y, cd s, const Vec3& ny) const;

  /// Double layer kernel: (D phi)(x) = int dl(x,y) phi(y) dGamma_y.
  Mat3c double_layer(const Vec3& x, const Vec3& y, cd s, const Vec3& ny) const;

  enum class WVariant { dynamic, kelvin, difference };
  /// Hypersingular kernel KW with (W phi)(x) = f.p. int KW(x,y) phi(y):
  /// KW = -T_x [double-layer kernel].  kelvin gives the elastostatic kernel,
  /// difference the weakly singular dynamic-minus-static remainder.
  Mat3c hypersingular(const Vec3& x, const Vec3& y, cd s, const Vec3& nx, const Vec3& ny,
                      WVariant variant) const;

  // scalar-level building blocks, reused by the assemblers
  static Mat3c e_tensor(const RadialScalars& sc, const Vec3& rhat);
  static GradTensor grad_tensor(const RadialScalars& sc, const Vec3& rhat);
  static SecondTensor second_tensor(const RadialScalars& sc, const Vec3& rhat);
  Mat3c traction_from_grad(const GradTensor& G, const Vec3& ny) const;
  Mat3c hyper_from_second(const SecondTensor& T4, const Vec3& nx, const Vec3& ny) const;

private:
  void check(double r, cd s) const;
  RadialScalars scalars_series(double r, cd s) const;
  RadialScalars scalars_direct(double r, cd s) const;

  IsotropicExterior mat_;
  double inv4pimu_;
  double kelvin_a0_, kelvin_b0_;
  // Taylor coefficients of the cancellation-prone combinations, powers of w
  static constexpr int kPrimary = 8;   // degree used below series_threshold
  static constexpr int kDelta = 16;    // degree for the difference scalars
  std::array<double, kDelta + 1> phiD_, psiD_, xiD_, omD_;  // w^k coefficients
  std::array<double, kDelta + 1> es_, phis_, p2s_;          // e^{-zs}, phi(zs), p2(zs)e^{-zs}
};

/// Second-order finite-difference residual of the Navier operator:
/// returns -Delta* U(x) + rho s^2 U(x) evaluated with central differences of
/// step h; the oracle used to certify that kernels and potentials satisfy
/// the exterior equation.
Vec3c verify_pde_pointwise(const std::function<Vec3c(const Vec3&)>& field, const Vec3& x, cd s,
                           const IsotropicExterior& mat, double h);

}  // namespace elastocq
