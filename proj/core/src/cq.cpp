#include "elastocq/cq.hpp"

#include <cmath>

#include "elastocq/parallel.hpp"

namespace elastocq {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// in-place iterative radix-2 FFT; sign = -1 forward, +1 inverse (unscaled)
void fft(VecXc& a, int sign) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a(i), a(j));
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / len;
    const cd wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cd w(1.0);
      for (int k = 0; k < len / 2; ++k) {
        const cd u = a(i + k);
        const cd v = a(i + k + len / 2) * w;
        a(i + k) = u + v;
        a(i + k + len / 2) = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

TimeGrid::TimeGrid(double dt_, int steps_) : dt(dt_), steps(steps_) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!is_pow2(steps)) throw ConfigError("step count must be a power of two");
}

cd bdf2_symbol(cd zeta) {
  const cd one_minus = 1.0 - zeta;
  return one_minus + 0.5 * one_minus * one_minus;
}

CqContour cq_frequencies(const TimeGrid& grid, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("contour eps must lie in (0,1)");
  CqContour c;
  c.transform_length = 2 * grid.steps;
  c.rho = std::pow(eps, 1.0 / (2.0 * c.transform_length));
  c.frequencies.resize(c.transform_length);
  for (int l = 0; l < c.transform_length; ++l) {
    const double ang = -2.0 * M_PI * l / c.transform_length;
    const cd zeta = c.rho * cd(std::cos(ang), std::sin(ang));
    c.frequencies[l] = bdf2_symbol(zeta) / grid.dt;
    if (!(c.frequencies[l].real() > 0.0))
      throw ConfigError("contour frequency left the right half plane; "
                        "increase the step count or decrease the contour radius");
  }
  return c;
}

MatX cq_convolve(const TimeGrid& grid,
                 const std::function<void(int, cd, const VecXc&, VecXc&)>& transfer,
                 const MatX& samples, int out_rows, double contour_eps,
                 bool parallel_frequencies) {
  const int N = grid.steps;
  if (samples.cols() != N) throw ConfigError("sample column count must equal the step count");
  const CqContour contour = cq_frequencies(grid, contour_eps);
  const int Nt = contour.transform_length;
  const int in_rows = static_cast<int>(samples.rows());

  // scale by rho^n, zero-pad, forward DFT row-wise
  MatXc spectrum(in_rows, Nt);
  {
    VecX scale(N);
    double r = 1.0;
    for (int n = 0; n < N; ++n, r *= contour.rho) scale(n) = r;
    VecXc buf(Nt);
    for (int i = 0; i < in_rows; ++i) {
      buf.setZero();
      for (int n = 0; n < N; ++n) buf(n) = samples(i, n) * scale(n);
      fft(buf, -1);
      spectrum.row(i) = buf.transpose();
    }
  }

  MatXc out_spec(out_rows, Nt);
  const int half = Nt / 2;
  auto apply = [&](int l) {
    VecXc in = spectrum.col(l);
    VecXc out(out_rows);
    transfer(l, contour.frequencies[l], in, out);
    out_spec.col(l) = out;
  };
  if (parallel_frequencies) {
    parallel_for_chunks(half + 1, [&](std::size_t b, std::size_t e) {
      for (std::size_t l = b; l < e; ++l) apply(static_cast<int>(l));
    });
  } else {
    for (int l = 0; l <= half; ++l) apply(l);
  }
  for (int l = half + 1; l < Nt; ++l) out_spec.col(l) = out_spec.col(Nt - l).conjugate();

  // inverse DFT row-wise, unscale, truncate to N steps
  MatX out(out_rows, N);
  double max_imag = 0.0;
  VecXc buf(Nt);
  for (int i = 0; i < out_rows; ++i) {
    buf = out_spec.row(i).transpose();
    fft(buf, +1);
    double r = 1.0;
    for (int n = 0; n < N; ++n, r /= contour.rho) {
      const cd v = buf(n) * (r / static_cast<double>(Nt));
      out(i, n) = v.real();
      max_imag = std::max(max_imag, std::abs(v.imag()));
    }
  }
  (void)max_imag;  // surfaced by solve_transient; scalar callers ignore it
  return out;
}

VecX cq_scalar_transfer(const TimeGrid& grid, const std::function<cd(cd)>& F, const VecX& g,
                        double contour_eps) {
  MatX samples(1, grid.steps);
  samples.row(0) = g.transpose();
  const MatX out = cq_convolve(
      grid,
      [&](int, cd s, const VecXc& in, VecXc& o) { o(0) = F(s) * in(0); },
      samples, 1, contour_eps, false);
  return out.row(0).transpose();
}

// ---------------------------------------------------------------------------

Signature Signature::bump(double start, double width, double amplitude) {
  if (!(width > 0.0)) throw ConfigError("bump width must be positive");
  Signature s;
  s.kind_ = Kind::bump;
  s.a_ = start;
  s.b_ = width;
  s.amp_ = amplitude;
  return s;
}

Signature Signature::gaussian(double center, double spread, double amplitude) {
  if (!(spread > 0.0)) throw ConfigError("gaussian spread must be positive");
  Signature s;
  s.kind_ = Kind::gaussian;
  s.a_ = center;
  s.b_ = spread;
  s.amp_ = amplitude;
  return s;
}

double Signature::value(double t) const {
  if (kind_ == Kind::gaussian) {
    const double u = (t - a_) / b_;
    return amp_ * std::exp(-0.5 * u * u);
  }
  const double tau = (t - a_) / b_;
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  // exp(4) normalization puts the peak at 1
  return amp_ * std::exp(4.0 - 1.0 / (tau * (1.0 - tau)));
}

double Signature::derivative(double t) const {
  if (kind_ == Kind::gaussian) {
    const double u = (t - a_) / b_;
    return -amp_ * u / b_ * std::exp(-0.5 * u * u);
  }
  const double tau = (t - a_) / b_;
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  const double f = tau * (1.0 - tau);
  return value(t) * (1.0 - 2.0 * tau) / (f * f) / b_;
}

double Signature::support_start() const {
  return kind_ == Kind::bump ? a_ : a_ - 6.0 * b_;
}

double Signature::support_end() const {
  return kind_ == Kind::bump ? a_ + b_ : a_ + 6.0 * b_;
}

IncidentPlaneWave::IncidentPlaneWave(Kind kind, const Vec3& direction, const Vec3& polarization,
                                     const IsotropicExterior& mat, Signature signature, double t0)
    : d_(direction.normalized()), p_(polarization), t0_(t0), mat_(mat), sig_(signature) {
  if (direction.norm() == 0.0) throw ConfigError("plane wave direction must be nonzero");
  if (kind == Kind::pressure) {
    if (p_.cross(d_).norm() > 1e-12 * p_.norm())
      throw ConfigError("pressure wave polarization must be parallel to the direction");
    c_ = mat.cp();
  } else {
    if (std::abs(p_.dot(d_)) > 1e-12 * p_.norm())
      throw ConfigError("shear wave polarization must be orthogonal to the direction");
    c_ = mat.cs();
  }
}

Vec3 IncidentPlaneWave::displacement(const Vec3& x, double t) const {
  return p_ * sig_.value(phase(x, t));
}

Mat3 IncidentPlaneWave::displacement_gradient(const Vec3& x, double t) const {
  // d_k u_i = -p_i d_k g'(phase)/c
  return (-sig_.derivative(phase(x, t)) / c_) * (p_ * d_.transpose()).transpose();
}

Vec3 IncidentPlaneWave::traction(const Vec3& x, double t, const Vec3& n) const {
  const double gp = sig_.derivative(phase(x, t));
  const Mat3 grad = (-gp / c_) * (d_ * p_.transpose());  // grad(i,k)? rows = d?, see below
  // grad u with u_i = p_i g(t - x.d/c): d_k u_i = -(d_k / c) p_i g'
  const Mat3 gu = (-gp / c_) * (p_ * d_.transpose());  // gu(i,k) = d_k u_i
  (void)grad;
  const double div = gu.trace();
  const Mat3 sigma = mat_.lambda * div * Mat3::Identity() + mat_.mu * (gu + gu.transpose());
  return sigma * n;
}

double IncidentPlaneWave::arrival_time(const SurfaceMesh& mesh) const {
  double proj_min = std::numeric_limits<double>::max();
  for (const auto& v : mesh.vertices) proj_min = std::min(proj_min, v.dot(d_));
  return sig_.support_start() + t0_ + proj_min / c_;
}

double IncidentPlaneWave::safe_delay(Kind kind, const Vec3& direction,
                                     const IsotropicExterior& mat, const Signature& signature,
                                     const SurfaceMesh& mesh) {
  const Vec3 d = direction.normalized();
  const double c = (kind == Kind::pressure) ? mat.cp() : mat.cs();
  double proj_min = std::numeric_limits<double>::max();
  for (const auto& v : mesh.vertices) proj_min = std::min(proj_min, v.dot(d));
  // need phase <= support_start at t = 0 on all of Gamma
  return -signature.support_start() - proj_min / c;
}

// ---------------------------------------------------------------------------

TransientSolution solve_transient(const CoupledAssembler& assembler, Formulation formulation,
                                  const TransientDriver& driver, const TimeGrid& grid,
                                  const std::vector<Vec3>& probes, double contour_eps) {
  const FunctionSpaces& spaces = assembler.spaces();
  const int nu = spaces.volume_dofs(), nl = spaces.p0_dofs(), np = spaces.p1_dofs();
  const int nsys = nu + nl + np;
  const int nprobe = 3 * static_cast<int>(probes.size());
  const int N = grid.steps;

  // sample the data functionals
  MatX g = MatX::Zero(nsys, N);
  for (int n = 0; n < N; ++n) {
    const double t = grid.time(n);
    TransmissionData data = assembler.zero_data();
    if (driver.incident_traction) {
      data.traction_p1 = boundary_functional_p1(
          assembler.surface(),
          [&](const Vec3& x, const Vec3& nrm) -> Vec3c {
            return driver.incident_traction(x, t, nrm).cast<cd>();
          });
    }
    if (driver.incident_trace) {
      data.trace_p0 = boundary_functional_p0(
          assembler.surface(),
          [&](const Vec3& x, const Vec3&) -> Vec3c {
            return driver.incident_trace(x, t).cast<cd>();
          });
    }
    if (driver.body_force) {
      data.volume_load = assemble_load(assembler.volume(), [&](const Vec3& x) -> Vec3c {
        return driver.body_force(x, t).cast<cd>();
      });
    }
    g.col(n).segment(0, nu) = data.volume_load.real();
    for (int sv = 0; sv < np / 3; ++sv)
      g.col(n).segment<3>(3 * spaces.boundary_to_volume(sv)) +=
          data.traction_p1.segment<3>(3 * sv).real();
    g.col(n).segment(nu, nl) = data.trace_p0.real();
  }

  PotentialEvaluator pot(assembler.surface(), assembler.exterior_material(),
                         assembler.bem().options().regular_order, 8);
  auto transfer = [&](int, cd s, const VecXc& ghat, VecXc& out) {
    const BoundaryOperatorSet ops = assembler.boundary_operators(s);
    TransmissionData dummy = assembler.zero_data();
    BlockSystem sys = assembler.build(formulation, ops, dummy);
    sys.rhs = ghat;
    const LaplaceSolution sol = solve(sys);
    out.resize(nsys + nprobe);
    out.segment(0, nu) = sol.u_minus;
    out.segment(nu, nl) = sol.lambda;
    out.segment(nu + nl, np) = sol.phi;
    const cd scale = formulation == Formulation::direct ? cd(1.0) : 1.0 / s;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const Vec3c val =
          scale * pot.double_layer(sol.phi, probes[p], s) - pot.single(sol.lambda, probes[p], s);
      out.segment<3>(nsys + 3 * p) = val;
    }
  };

  const MatX full = cq_convolve(grid, transfer, g, nsys + nprobe, contour_eps, true);

  TransientSolution ts{grid, VecX(N), MatX(), MatX(), MatX(), MatX(), 0.0, formulation};
  for (int n = 0; n < N; ++n) ts.times(n) = grid.time(n);
  ts.u_minus = full.topRows(nu);
  ts.lambda = full.middleRows(nu, nl);
  ts.phi = full.middleRows(nu + nl, np);
  ts.probes = full.bottomRows(nprobe);
  return ts;
}

}  // namespace elastocq
