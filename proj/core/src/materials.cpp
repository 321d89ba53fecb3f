#include "elastocq/materials.hpp"

#include <cmath>

namespace elastocq {

IsotropicExterior::IsotropicExterior(double lambda_, double mu_, double rho_)
    : lambda(lambda_), mu(mu_), rho(rho_) {
  if (mu <= 0.0) throw MaterialError("shear modulus must be positive");
  if (rho <= 0.0) throw MaterialError("density must be positive");
  if ((2.0 * mu + 3.0 * lambda) / 3.0 <= 0.0)
    throw MaterialError("bulk modulus (2 mu + 3 lambda)/3 must be positive");
  cs_ = std::sqrt(mu / rho);
  cp_ = std::sqrt((2.0 * mu + lambda) / rho);
}

double IsotropicExterior::bulk_modulus() const { return (2.0 * mu + 3.0 * lambda) / 3.0; }

std::pair<double, double> wave_speeds(const IsotropicExterior& mat) {
  return {mat.cs(), mat.cp()};
}

double bulk_modulus(const IsotropicExterior& mat) { return mat.bulk_modulus(); }

Vec6 strain_to_voigt(const Mat3& e) {
  Vec6 v;
  v << e(0, 0), e(1, 1), e(2, 2), 2.0 * e(1, 2), 2.0 * e(0, 2), 2.0 * e(0, 1);
  return v;
}

Mat3 voigt_to_stress(const Vec6& v) {
  Mat3 s;
  s << v(0), v(5), v(4),
       v(5), v(1), v(3),
       v(4), v(3), v(2);
  return s;
}

Mat6 isotropic_stiffness(double lambda, double mu) {
  Mat6 C = Mat6::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) C(i, j) = lambda;
    C(i, i) = lambda + 2.0 * mu;
    C(i + 3, i + 3) = mu;
  }
  return C;
}

Mat6 voigt_symmetrize(const Mat6& C) { return 0.5 * (C + C.transpose()); }

Mat3 apply_hooke(const Mat6& C_voigt, const Mat3& e) {
  return voigt_to_stress(C_voigt * strain_to_voigt(e));
}

Mat3 apply_hooke(const IsotropicExterior& mat, const Mat3& e) {
  return mat.lambda * e.trace() * Mat3::Identity() + 2.0 * mat.mu * e;
}

double coercivity_constant(const Mat6& C_voigt) {
  // Mandel scaling turns e:Ce into an ordinary quadratic form on R^6.
  Vec6 d;
  const double s2 = std::sqrt(2.0);
  d << 1, 1, 1, s2, s2, s2;
  Mat6 M = d.asDiagonal() * C_voigt * d.asDiagonal();
  // engineering-strain Voigt: e:Ce = eps^T C eps with eps = D2 t, D2 = diag(1,1,1,sqrt2,..)
  Eigen::SelfAdjointEigenSolver<Mat6> es(0.5 * (M + M.transpose()));
  return es.eigenvalues().minCoeff();
}

AnisotropicInterior::AnisotropicInterior(Mat6 C, double rho)
    : C_{std::move(C)}, rho_{rho}, uniform_(true) {
  validate();
}

AnisotropicInterior::AnisotropicInterior(std::vector<Mat6> C, std::vector<double> rho)
    : C_(std::move(C)), rho_(std::move(rho)), uniform_(false) {
  if (C_.empty() || C_.size() != rho_.size())
    throw MaterialError("per-element stiffness and density lists must match and be nonempty");
  validate();
}

AnisotropicInterior AnisotropicInterior::isotropic(double lambda, double mu, double rho) {
  IsotropicExterior check(lambda, mu, rho);  // reuse the positivity checks
  (void)check;
  return AnisotropicInterior(isotropic_stiffness(lambda, mu), rho);
}

void AnisotropicInterior::validate() {
  c0_ = std::numeric_limits<double>::max();
  rho_min_ = std::numeric_limits<double>::max();
  rho_max_ = 0.0;
  for (std::size_t e = 0; e < C_.size(); ++e) {
    if ((C_[e] - C_[e].transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, C_[e].cwiseAbs().maxCoeff()))
      throw MaterialError("stiffness tensor violates the pairwise symmetries (element " +
                          std::to_string(e) + ")");
    double c0 = coercivity_constant(C_[e]);
    if (c0 <= 0.0)
      throw MaterialError("stiffness tensor is not coercive (element " + std::to_string(e) +
                          ", c0 = " + std::to_string(c0) + ")");
    c0_ = std::min(c0_, c0);
    if (rho_[e] <= 0.0)
      throw MaterialError("density must be positive (element " + std::to_string(e) + ")");
    rho_min_ = std::min(rho_min_, rho_[e]);
    rho_max_ = std::max(rho_max_, rho_[e]);
  }
}

}  // namespace elastocq
