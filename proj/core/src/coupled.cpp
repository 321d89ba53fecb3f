#include "elastocq/coupled.hpp"

#include <random>

namespace elastocq {

const char* to_string(Formulation f) {
  return f == Formulation::direct ? "direct" : "alternative";
}

CoupledAssembler::CoupledAssembler(const SurfaceMesh& surface, const VolumeMesh& volume,
                                   const IsotropicExterior& exterior,
                                   const AnisotropicInterior& interior, BemOptions opts)
    : surface_(&surface), volume_(&volume), ext_(exterior), spaces_(surface, volume),
      bem_(surface, exterior, opts), fem_(assemble_interior(volume, surface, spaces_, interior)),
      bmass_(boundary_mass_p0_p1(surface)) {}

TransmissionData CoupledAssembler::zero_data() const {
  TransmissionData d;
  d.volume_load = VecXc::Zero(spaces_.volume_dofs());
  d.traction_p1 = VecXc::Zero(spaces_.p1_dofs());
  d.trace_p0 = VecXc::Zero(spaces_.p0_dofs());
  return d;
}

BlockSystem CoupledAssembler::build(Formulation f, const BoundaryOperatorSet& ops,
                                    const TransmissionData& data) const {
  const ComplexFrequency freq(ops.s);
  BlockSystem sys;
  sys.formulation = f;
  sys.s = ops.s;
  sys.n_u = spaces_.volume_dofs();
  sys.n_lambda = spaces_.p0_dofs();
  sys.n_phi = spaces_.p1_dofs();
  if (data.volume_load.size() != sys.n_u || data.traction_p1.size() != sys.n_phi ||
      data.trace_p0.size() != sys.n_lambda)
    throw AssemblyError("transmission data dimensions do not match the spaces");
  const int n = sys.size();
  const int ou = sys.offset_u(), ol = sys.offset_lambda(), op = sys.offset_phi();
  const cd s = ops.s;
  const cd phi_scale = (f == Formulation::direct) ? cd(1.0) : 1.0 / s;

  sys.A.setZero(n, n);
  // row u: (K + s^2 M) u - <Lambda, gamma- V>
  sys.A.block(ou, ou, sys.n_u, sys.n_u) =
      fem_.stiffness.cast<cd>() + (s * s) * fem_.mass.cast<cd>();
  sys.A.block(ou, ol, sys.n_u, sys.n_lambda) = -fem_.coupling.transpose().cast<cd>();
  // row lambda: <mu, gamma- U> + <mu, V Lambda> - phi_scale <mu, (1/2 I + K) Phi>
  sys.A.block(ol, ou, sys.n_lambda, sys.n_u) = fem_.coupling.cast<cd>();
  sys.A.block(ol, ol, sys.n_lambda, sys.n_lambda) = ops.V;
  sys.A.block(ol, op, sys.n_lambda, sys.n_phi) =
      -phi_scale * (0.5 * bmass_.cast<cd>() + ops.K);
  // row phi: <(1/2 I + K') Lambda, eta> + phi_scale <W Phi, eta>
  sys.A.block(op, ol, sys.n_phi, sys.n_lambda) =
      0.5 * bmass_.transpose().cast<cd>() + ops.Kp;
  sys.A.block(op, op, sys.n_phi, sys.n_phi) = phi_scale * ops.W;

  sys.rhs.setZero(n);
  sys.rhs.segment(ou, sys.n_u) = data.volume_load;
  for (int sv = 0; sv < sys.n_phi / 3; ++sv)
    sys.rhs.segment<3>(ou + 3 * spaces_.boundary_to_volume(sv)) +=
        data.traction_p1.segment<3>(3 * sv);
  sys.rhs.segment(ol, sys.n_lambda) = data.trace_p0;
  return sys;
}

BlockSystem CoupledAssembler::assemble_direct(cd s, const TransmissionData& data) const {
  return build(Formulation::direct, bem_.assemble(s), data);
}

BlockSystem CoupledAssembler::assemble_alternative(cd s, const TransmissionData& data) const {
  return build(Formulation::alternative, bem_.assemble(s), data);
}

LaplaceSolution solve(const BlockSystem& sys) {
  if (!(sys.s.real() > 0.0)) throw SolveError("block system requires Re s > 0");
  Eigen::PartialPivLU<MatXc> lu(sys.A);
  const VecXc x = lu.solve(sys.rhs);
  if (!x.allFinite())
    throw SolveError("factorization failed at s = (" + std::to_string(sys.s.real()) + ", " +
                     std::to_string(sys.s.imag()) + ")");
  LaplaceSolution sol;
  sol.formulation = sys.formulation;
  sol.s = sys.s;
  sol.u_minus = x.segment(sys.offset_u(), sys.n_u);
  sol.lambda = x.segment(sys.offset_lambda(), sys.n_lambda);
  sol.phi = x.segment(sys.offset_phi(), sys.n_phi);
  const double bnorm = sys.rhs.norm();
  sol.residual = (sys.A * x - sys.rhs).norm() / (bnorm > 0 ? bnorm : 1.0);
  sol.condition_estimate = lu.rcond();
  return sol;
}

bool point_inside(const SurfaceMesh& mesh, const Vec3& x) {
  double omega = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto v = mesh.triangle_vertices(t);
    const Vec3 a = v[0] - x, b = v[1] - x, c = v[2] - x;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    omega += 2.0 * std::atan2(num, den);
  }
  return omega > 2.0 * M_PI;  // ~4pi inside, ~0 outside
}

FieldSample exterior_field(const LaplaceSolution& sol, const CoupledAssembler& assembler,
                           const Vec3& x) {
  const SurfaceMesh& mesh = assembler.surface();
  PotentialEvaluator pot(mesh, assembler.exterior_material(),
                         assembler.bem().options().regular_order, 8);
  FieldSample out;
  out.inside = point_inside(mesh, x);
  bool warn_s = false, warn_d = false;
  const cd scale = sol.formulation == Formulation::direct ? cd(1.0) : 1.0 / sol.s;
  const Vec3c d = pot.double_layer(sol.phi, x, sol.s, &warn_d);
  const Vec3c sng = pot.single(sol.lambda, x, sol.s, &warn_s);
  out.value = scale * d - sng;
  out.near_surface = warn_s || warn_d;
  return out;
}

EllipticityProbe ellipticity_probe(const BoundaryOperatorSet& ops, const InteriorBlocks& fem,
                                   const SurfaceMesh& mesh, cd s, int draws, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  const int nl = static_cast<int>(ops.V.rows());
  const int np = static_cast<int>(ops.W.rows());
  const MatX B = boundary_mass_p0_p1(mesh);
  const MatX M1 = boundary_mass_p1(mesh);
  const VecX M0 = boundary_mass_p0(mesh);
  const cd sinv = 1.0 / s;
  EllipticityProbe probe;
  probe.min_re_b0 = std::numeric_limits<double>::max();
  probe.max_lhs_over_rhs = 0.0;
  probe.fem_identity_error = 0.0;
  const double sigma = s.real();
  const int nu = static_cast<int>(fem.stiffness.rows());
  auto rand_vec = [&](int n) {
    VecXc v(n);
    for (int i = 0; i < n; ++i) v(i) = cd(dist(gen), dist(gen));
    return VecXc(v / v.norm());
  };
  for (int d = 0; d < draws; ++d) {
    const VecXc lam = rand_vec(nl);
    const VecXc phi = rand_vec(np);
    // Re< B0 (Lambda,Phi), conj(Lambda,Phi) > with the bilinear pairing
    const cd b0 = (lam.adjoint() * (s * (ops.V * lam) - ops.K * phi)).value() +
                  (phi.adjoint() * (ops.Kp * lam + sinv * (ops.W * phi))).value();
    probe.min_re_b0 = std::min(probe.min_re_b0, b0.real());
    // coercivity calibration: L2 surrogates of the -1/2 / +1/2 norms
    const double lhs = (lam.adjoint() * (M0.asDiagonal() * lam)).value().real() +
                       (phi.adjoint() * (M1 * phi)).value().real();
    const double rhs =
        std::norm(s) / (sigma * std::pow(std::min(1.0, sigma), 2)) * std::max(b0.real(), 0.0);
    if (rhs > 0.0) probe.max_lhs_over_rhs = std::max(probe.max_lhs_over_rhs, lhs / rhs);
    // FEM energy identity
    const VecXc u = rand_vec(nu);
    const cd ku = (u.adjoint() * (fem.stiffness * u)).value();
    const cd mu_ = (u.adjoint() * (fem.mass * u)).value();
    const cd lhs_id = std::conj(s) * (ku + s * s * mu_);
    const double rhs_id = sigma * (ku.real() + std::norm(s) * mu_.real());
    probe.fem_identity_error =
        std::max(probe.fem_identity_error, std::abs(lhs_id.real() - rhs_id) / std::abs(rhs_id));
  }
  return probe;
}

}  // namespace elastocq
