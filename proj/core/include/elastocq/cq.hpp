#pragma once

#include <functional>

#include "elastocq/coupled.hpp"

namespace elastocq {

/// Uniform causal time grid; the step count is a power of two so the
/// oversampled transform pipeline stays radix-2.
struct TimeGrid {
  double dt = 0.0;
  int steps = 0;

  TimeGrid(double dt_, int steps_);
  double final_time() const { return dt * steps; }
  double time(int n) const { return dt * n; }
};

/// BDF2 generating polynomial gamma(zeta) = (1 - zeta) + (1 - zeta)^2 / 2.
cd bdf2_symbol(cd zeta);

struct CqContour {
  double rho = 0.0;        ///< contour radius, eps^{1/(2 Ntilde)}
  int transform_length = 0;  ///< Ntilde = 2 N
  std::vector<cd> frequencies;  ///< s_l = gamma(rho e^{-2 pi i l/Ntilde})/dt
};

/// Contour frequencies with conjugate pairing s_{N~-l} = conj(s_l); throws if
/// any frequency leaves the right half plane.
CqContour cq_frequencies(const TimeGrid& grid, double eps = 1e-12);

/// All-steps-at-once convolution quadrature: scale by rho^n, DFT, apply the
/// transfer operator at each contour frequency, inverse DFT, unscale.  Only
/// the frequencies with l <= Ntilde/2 are visited; the rest follow from
/// conjugation (valid because the input samples are real).  The transfer is
/// invoked as transfer(l, s_l, ghat, uhat) and may change dimension.
MatX cq_convolve(const TimeGrid& grid,
                 const std::function<void(int, cd, const VecXc&, VecXc&)>& transfer,
                 const MatX& samples, int out_rows, double contour_eps = 1e-12,
                 bool parallel_frequencies = true);

/// Scalar convenience wrapper for transfer functions F(s).
VecX cq_scalar_transfer(const TimeGrid& grid, const std::function<cd(cd)>& F, const VecX& g,
                        double contour_eps = 1e-12);

/// Smooth causal pulse with a closed-form derivative.
class Signature {
public:
  enum class Kind { bump, gaussian };

  /// C-infinity bump supported on [start, start + width], peak amplitude at
  /// the midpoint.
  static Signature bump(double start, double width, double amplitude = 1.0);
  /// Gaussian pulse exp(-(t-center)^2/(2 spread^2)); effectively causal when
  /// center >= 6 spread.
  static Signature gaussian(double center, double spread, double amplitude = 1.0);

  double value(double t) const;
  double derivative(double t) const;
  double support_start() const;
  double support_end() const;

private:
  Kind kind_ = Kind::bump;
  double a_ = 0, b_ = 0, amp_ = 1;
};

/// Plane pressure or shear wave u(x,t) = p g(t - x.d/c - t0) with the
/// traction computed from Hooke's law in closed form.
class IncidentPlaneWave {
public:
  enum class Kind { pressure, shear };

  /// t0 < 0 shifts the pulse so it has not reached the surface at t = 0; pass
  /// auto_delay to pick the smallest such shift for a given mesh.
  IncidentPlaneWave(Kind kind, const Vec3& direction, const Vec3& polarization,
                    const IsotropicExterior& mat, Signature signature, double t0);

  Vec3 displacement(const Vec3& x, double t) const;
  Mat3 displacement_gradient(const Vec3& x, double t) const;
  Vec3 traction(const Vec3& x, double t, const Vec3& n) const;

  double speed() const { return c_; }
  double phase(const Vec3& x, double t) const { return t - x.dot(d_) / c_ - t0_; }
  /// first instant the pulse support touches the surface
  double arrival_time(const SurfaceMesh& mesh) const;
  /// largest t0-free start so data vanish for t <= 0 on the mesh
  static double safe_delay(Kind kind, const Vec3& direction, const IsotropicExterior& mat,
                           const Signature& signature, const SurfaceMesh& mesh);

private:
  Vec3 d_, p_;
  double c_ = 0, t0_ = 0;
  IsotropicExterior mat_;
  Signature sig_;
};

struct TransientSolution {
  TimeGrid grid;
  VecX times;
  MatX u_minus;  ///< volume coefficients, rows = dofs, cols = steps
  MatX lambda;
  MatX phi;
  MatX probes;   ///< exterior displacement traces, rows = 3 * probe index
  double max_imag_part = 0.0;  ///< conjugate-symmetry defect of the inverse transform
  Formulation formulation = Formulation::direct;
};

struct TransientDriver {
  std::function<Vec3(const Vec3&, double)> incident_trace;  ///< gamma+ uinc
  std::function<Vec3(const Vec3&, double, const Vec3&)> incident_traction;  ///< T+ uinc
  std::function<Vec3(const Vec3&, double)> body_force;  ///< may be empty
};

/// Full pipeline: sample the data functionals on the grid, push them through
/// the CQ transform, solve one coupled system per contour frequency, pull the
/// solution and the probe traces back to the time domain.
TransientSolution solve_transient(const CoupledAssembler& assembler, Formulation formulation,
                                  const TransientDriver& driver, const TimeGrid& grid,
                                  const std::vector<Vec3>& probes,
                                  double contour_eps = 1e-12);

}  // namespace elastocq
