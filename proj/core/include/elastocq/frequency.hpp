#pragma once

#include <algorithm>

#include "elastocq/types.hpp"

namespace elastocq {

/// Laplace parameter restricted to the right half plane, with the cached
/// quantities sigma = Re s and sigma_lower = min(1, sigma) used by the
/// stability bounds.
struct ComplexFrequency {
  cd s;

  explicit ComplexFrequency(cd s_) : s(s_) {
    if (!(s.real() > 0.0))
      throw KernelDomainError("Laplace parameter must satisfy Re s > 0");
  }
  double sigma() const { return s.real(); }
  double sigma_lower() const { return std::min(1.0, s.real()); }
  double modulus() const { return std::abs(s); }
};

}  // namespace elastocq
