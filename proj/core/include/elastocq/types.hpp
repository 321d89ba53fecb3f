#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace elastocq {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec3c = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Invalid material parameters (nonpositive density, shear or bulk modulus,
/// broken stiffness symmetry or coercivity).
class MaterialError : public std::runtime_error {
public:
  explicit MaterialError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mesh fails a structural invariant; carries the offending element index.
class MeshValidationError : public std::runtime_error {
public:
  MeshValidationError(const std::string& msg, long element)
      : std::runtime_error(msg + " (element " + std::to_string(element) + ")"),
        element_(element) {}
  long element() const { return element_; }

private:
  long element_;
};

/// Kernel evaluated at a forbidden point (x == y or Re s <= 0).
class KernelDomainError : public std::runtime_error {
public:
  explicit KernelDomainError(const std::string& msg) : std::runtime_error(msg) {}
};

class AssemblyError : public std::runtime_error {
public:
  explicit AssemblyError(const std::string& msg) : std::runtime_error(msg) {}
};

class SolveError : public std::runtime_error {
public:
  explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace elastocq
