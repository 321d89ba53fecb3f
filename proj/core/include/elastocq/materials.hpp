#pragma once

#include <vector>

#include "elastocq/types.hpp"

namespace elastocq {

/// Homogeneous isotropic elastic medium occupying the unbounded exterior.
struct IsotropicExterior {
  double lambda = 0.0;  ///< first Lame parameter
  double mu = 0.0;      ///< shear modulus, > 0
  double rho = 0.0;     ///< mass density, > 0

  IsotropicExterior() = default;
  IsotropicExterior(double lambda_, double mu_, double rho_);

  double cs() const { return cs_; }  ///< shear wave speed sqrt(mu/rho)
  double cp() const { return cp_; }  ///< pressure wave speed sqrt((2mu+lambda)/rho)
  double bulk_modulus() const;       ///< (2 mu + 3 lambda)/3

private:
  double cs_ = 0.0, cp_ = 0.0;
};

std::pair<double, double> wave_speeds(const IsotropicExterior& mat);
double bulk_modulus(const IsotropicExterior& mat);

/// Voigt order used throughout: (11, 22, 33, 23, 13, 12); strains carry the
/// engineering factor 2 on the shear slots.
Vec6 strain_to_voigt(const Mat3& e);
Mat3 voigt_to_stress(const Vec6& v);

/// 6x6 Voigt matrix of an isotropic stiffness tensor.
Mat6 isotropic_stiffness(double lambda, double mu);

/// Symmetrize a Voigt matrix so the represented tensor satisfies
/// C_ijkl = C_jikl = C_klij (an involution on valid inputs).
Mat6 voigt_symmetrize(const Mat6& C);

/// sigma = C : e; for isotropic C this equals lambda tr(e) I + 2 mu e.
Mat3 apply_hooke(const Mat6& C_voigt, const Mat3& e);
Mat3 apply_hooke(const IsotropicExterior& mat, const Mat3& e);

/// Smallest eigenvalue c0 of e:Ce over unit-norm symmetric e (Mandel scaling).
double coercivity_constant(const Mat6& C_voigt);

/// Possibly inhomogeneous anisotropic interior: piecewise-constant stiffness
/// and density per tetrahedron.  A single entry means a homogeneous medium.
class AnisotropicInterior {
public:
  AnisotropicInterior(Mat6 C_voigt, double rho);
  AnisotropicInterior(std::vector<Mat6> C_voigt, std::vector<double> rho);
  static AnisotropicInterior isotropic(double lambda, double mu, double rho);

  const Mat6& stiffness(std::size_t element) const {
    return uniform_ ? C_[0] : C_[element];
  }
  double density(std::size_t element) const {
    return uniform_ ? rho_[0] : rho_[element];
  }
  bool uniform() const { return uniform_; }
  std::size_t size() const { return C_.size(); }
  double coercivity() const { return c0_; }
  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }

private:
  void validate();
  std::vector<Mat6> C_;
  std::vector<double> rho_;
  bool uniform_ = true;
  double c0_ = 0.0, rho_min_ = 0.0, rho_max_ = 0.0;
};

}  // namespace elastocq
