#include "elastocq/manufactured.hpp"

#include "elastocq/quadrature.hpp"

namespace elastocq {

namespace {

Vec3c point_source_field(const KupradzeKernel& kernel, const Vec3& x, const Vec3& y,
                         const Vec3& q, cd s) {
  return kernel.fundamental(x, y, s) * q.cast<cd>();
}

Vec3c point_source_traction(const KupradzeKernel& kernel, const Vec3& x, const Vec3& y,
                            const Vec3& q, cd s, const Vec3& n) {
  const GradTensor G = kernel.gradient(x, y, s);
  Mat3c gu;  // gu(k,i) = d_k u_i with u = E(., y) q
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) {
      cd v = 0;
      for (int j = 0; j < 3; ++j) v += G[k](i, j) * q(j);
      gu(k, i) = v;
    }
  const cd div = gu.trace();
  const auto& mat = kernel.material();
  Mat3c sigma = mat.lambda * div * Mat3c::Identity();
  sigma += mat.mu * (gu + gu.transpose());
  return sigma * n.cast<cd>();
}

}  // namespace

ManufacturedLaplace::ManufacturedLaplace(cd s, const IsotropicExterior& exterior,
                                         const IsotropicExterior& interior_iso, const Vec3& y0,
                                         const Vec3& y1, const Vec3& q0, const Vec3& q1,
                                         const SurfaceMesh& mesh)
    : s_(s), ext_(exterior), int_(interior_iso), y0_(y0), y1_(y1), q0_(q0), q1_(q1) {
  if (!point_inside(mesh, y0))
    throw ConfigError("exterior-field source must lie inside the scatterer");
  if (point_inside(mesh, y1))
    throw ConfigError("interior-field source must lie outside the scatterer");
  double diam = 0.0;
  for (const auto& v : mesh.vertices)
    for (const auto& w : mesh.vertices) diam = std::max(diam, (v - w).norm());
  double dist = std::numeric_limits<double>::max();
  for (const auto& v : mesh.vertices)
    dist = std::min({dist, (v - y0).norm(), (v - y1).norm()});
  warning_ = dist < 0.2 * diam;
}

Vec3c ManufacturedLaplace::u_plus(const Vec3& x) const {
  return point_source_field(ext_, x, y0_, q0_, s_);
}

Vec3c ManufacturedLaplace::u_minus(const Vec3& x) const {
  return point_source_field(int_, x, y1_, q1_, s_);
}

Vec3c ManufacturedLaplace::traction_plus(const Vec3& x, const Vec3& n) const {
  return point_source_traction(ext_, x, y0_, q0_, s_, n);
}

Vec3c ManufacturedLaplace::traction_minus(const Vec3& x, const Vec3& n) const {
  return point_source_traction(int_, x, y1_, q1_, s_, n);
}

Vec3c ManufacturedLaplace::trace_datum(const Vec3& x) const { return u_minus(x) - u_plus(x); }

Vec3c ManufacturedLaplace::traction_datum(const Vec3& x, const Vec3& n) const {
  return traction_minus(x, n) - traction_plus(x, n);
}

TransmissionData ManufacturedLaplace::data(const CoupledAssembler& assembler) const {
  TransmissionData d = assembler.zero_data();
  d.traction_p1 = boundary_functional_p1(
      assembler.surface(), [&](const Vec3& x, const Vec3& n) { return traction_datum(x, n); });
  d.trace_p0 = boundary_functional_p0(
      assembler.surface(), [&](const Vec3& x, const Vec3&) { return trace_datum(x); });
  return d;
}

VecXc ManufacturedLaplace::lambda_exact(const SurfaceMesh& mesh) const {
  VecXc lam(3 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    lam.segment<3>(3 * t) = traction_plus(mesh.centroids[t], mesh.normals[t]);
  return lam;
}

VecXc ManufacturedLaplace::phi_exact(const SurfaceMesh& mesh, Formulation f) const {
  VecXc phi(3 * mesh.num_vertices());
  const cd scale = f == Formulation::direct ? cd(1.0) : s_;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    phi.segment<3>(3 * v) = scale * u_plus(mesh.vertices[v]);
  return phi;
}

VecXc ManufacturedLaplace::u_exact(const VolumeMesh& volume) const {
  VecXc u(3 * volume.num_vertices());
  for (int v = 0; v < volume.num_vertices(); ++v)
    u.segment<3>(3 * v) = u_minus(volume.vertices[v]);
  return u;
}

// ---------------------------------------------------------------------------

TransientPointSource::TransientPointSource(const IsotropicExterior& mat, const Vec3& source,
                                           const Vec3& charge, Signature signature,
                                           int quad_order)
    : mat_(mat), y_(source), q_(charge), sig_(signature) {
  gauss_legendre_01(quad_order, gx_, gw_);
}

Vec3 TransientPointSource::displacement(const Vec3& x, double t) const {
  const Vec3 d = x - y_;
  const double r = d.norm();
  const Vec3 rh = d / r;
  const double cp = mat_.cp(), cs = mat_.cs();
  const double a = rh.dot(q_);
  // near-field integral J = int_{r/cp}^{r/cs} tau w(t - tau) dtau
  const double lo = r / cp, hi = r / cs;
  double J = 0.0;
  for (std::size_t k = 0; k < gx_.size(); ++k) {
    const double tau = lo + (hi - lo) * gx_[k];
    J += gw_[k] * (hi - lo) * tau * sig_.value(t - tau);
  }
  const double wp = sig_.value(t - lo), ws = sig_.value(t - hi);
  const double C = 1.0 / (4.0 * M_PI * mat_.rho);
  return C * ((3.0 * a * rh - q_) * J / (r * r * r) + a * rh * wp / (cp * cp * r) +
              (q_ - a * rh) * ws / (cs * cs * r));
}

Mat3 TransientPointSource::displacement_gradient(const Vec3& x, double t) const {
  const Vec3 d = x - y_;
  const double r = d.norm(), r2 = r * r, r3 = r2 * r, r4 = r3 * r;
  const Vec3 rh = d / r;
  const double cp = mat_.cp(), cs = mat_.cs();
  const double a = rh.dot(q_);
  const double lo = r / cp, hi = r / cs;
  double J = 0.0;
  for (std::size_t k = 0; k < gx_.size(); ++k) {
    const double tau = lo + (hi - lo) * gx_[k];
    J += gw_[k] * (hi - lo) * tau * sig_.value(t - tau);
  }
  const double wp = sig_.value(t - lo), ws = sig_.value(t - hi);
  const double wpp = sig_.derivative(t - lo), wsp = sig_.derivative(t - hi);
  const double Jr = r * (ws / (cs * cs) - wp / (cp * cp));  // dJ/dr
  const double C = 1.0 / (4.0 * M_PI * mat_.rho);
  const Mat3 Q = Mat3::Identity() - rh * rh.transpose();
  const Vec3 da = Q * q_ / r;  // grad of a = rh.q
  Mat3 gu;  // gu(i,k) = d_k u_i
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      const double drh_ik = Q(i, k) / r;
      double v = 0.0;
      // term 1: (3 a rh_i - q_i) J / r^3
      v += (3.0 * da(k) * rh(i) + 3.0 * a * drh_ik) * J / r3;
      v += (3.0 * a * rh(i) - q_(i)) * (rh(k) * Jr / r3 - 3.0 * rh(k) * J / r4);
      // term 2: a rh_i wp / (cp^2 r)
      v += (da(k) * rh(i) + a * drh_ik) * wp / (cp * cp * r);
      v += a * rh(i) * (-rh(k) * wpp / cp / r - wp * rh(k) / r2) / (cp * cp);
      // term 3: (q_i - a rh_i) ws / (cs^2 r)
      v += (-da(k) * rh(i) - a * drh_ik) * ws / (cs * cs * r);
      v += (q_(i) - a * rh(i)) * (-rh(k) * wsp / cs / r - ws * rh(k) / r2) / (cs * cs);
      gu(i, k) = C * v;
    }
  }
  return gu;
}

Vec3 TransientPointSource::traction(const Vec3& x, double t, const Vec3& n) const {
  const Mat3 gu = displacement_gradient(x, t);  // (i,k) = d_k u_i
  const double div = gu.trace();
  const Mat3 sigma = mat_.lambda * div * Mat3::Identity() + mat_.mu * (gu + gu.transpose());
  return sigma * n;
}

}  // namespace elastocq
