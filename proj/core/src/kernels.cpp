#include "elastocq/kernels.hpp"

#include <cmath>

namespace elastocq {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// exp(z) - 1 without cancellation for small z.
cd cexpm1(cd z) {
  const double ex = std::expm1(z.real());          // e^x - 1
  const double sy = std::sin(z.imag());
  const double cy_m1 = -2.0 * std::pow(std::sin(0.5 * z.imag()), 2);  // cos y - 1
  return {ex * (cy_m1 + 1.0) + cy_m1, (ex + 1.0) * sy};
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

KupradzeKernel::KupradzeKernel(const IsotropicExterior& mat) : mat_(mat) {
  inv4pimu_ = 1.0 / (4.0 * kPi * mat_.mu);
  const double lam = mat_.lambda, mu = mat_.mu;
  kelvin_a0_ = (lam + 3.0 * mu) / (8.0 * kPi * mu * (lam + 2.0 * mu));
  kelvin_b0_ = (lam + mu) / (8.0 * kPi * mu * (lam + 2.0 * mu));
  const double cs = mat_.cs(), cp = mat_.cp();
  const double cs2 = cs * cs;
  for (int k = 0; k <= kDelta; ++k) {
    const int n = k + 2;
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const double invs = std::pow(cs, -n), invp = std::pow(cp, -n);
    const double fn = factorial(n);
    // phi(z) = e^{-z}(1+z):       z^n coefficient -sgn (n-1)/n!
    phiD_[k] = cs2 * (-sgn * (n - 1) / fn) * (invs - invp);
    // psi(z) = e^{-z}(3+3z+z^2):  z^n coefficient sgn (n-1)(n-3)/n!
    psiD_[k] = cs2 * (sgn * (n - 1) * (n - 3) / fn) * (invp - invs);
    // xi(z) = e^{-z}(9+9z+4z^2+z^3)
    xiD_[k] = cs2 * (sgn * (-std::pow(n, 3) + 7 * n * n - 15 * n + 9) / fn) * (invs - invp);
    // omega(z) = e^{-z}(36+36z+17z^2+5z^3+z^4)
    const double qom = 36.0 - 36.0 * n + 17.0 * n * (n - 1) - 5.0 * n * (n - 1) * (n - 2) +
                       static_cast<double>(n) * (n - 1) * (n - 2) * (n - 3);
    omD_[k] = cs2 * (sgn * qom / fn) * (invp - invs);
    // plain powers of w for e^{-zs}, phi(zs), p2(zs) e^{-zs}; index k = power
    const double sgnk = (k % 2 == 0) ? 1.0 : -1.0;
    const double fk = factorial(k);
    es_[k] = sgnk / (fk * std::pow(cs, k));
    phis_[k] = (k >= 2) ? -sgnk * (k - 1) / (fk * std::pow(cs, k)) : (k == 0 ? 1.0 : 0.0);
    p2s_[k] = (k >= 3) ? sgnk * (k - 1) * (k - 2) / (fk * std::pow(cs, k)) : (k == 0 ? 2.0 : 0.0);
  }
}

void KupradzeKernel::check(double r, cd s) const {
  if (!(r > 0.0)) throw KernelDomainError("kernel evaluated at coincident points");
  if (!(s.real() > 0.0)) throw KernelDomainError("kernel requires Re s > 0");
}

RadialScalars KupradzeKernel::scalars(double r, cd s) const {
  check(r, s);
  if (std::abs(s) * r / mat_.cs() < series_threshold) return scalars_series(r, s);
  return scalars_direct(r, s);
}

RadialScalars KupradzeKernel::scalars_series(double r, cd s) const {
  const cd w = s * r;
  cd phiD = 0, psiD = 0, xiD = 0, omD = 0;
  cd wk = 1.0;
  for (int k = 0; k <= kPrimary; ++k) {
    phiD += phiD_[k] * wk;
    psiD += psiD_[k] * wk;
    xiD += xiD_[k] * wk;
    omD += omD_[k] * wk;
    wk *= w;
  }
  const cd zs = w / mat_.cs();
  const cd es = std::exp(-zs);
  const double pre = inv4pimu_ / r;
  RadialScalars sc;
  sc.r = r;
  sc.A = pre * (es + phiD);
  sc.B = pre * psiD;
  const cd fp = -es * (1.0 + zs) * inv4pimu_ / (r * r);
  const cd fpp = es * (2.0 + zs * (2.0 + zs)) * inv4pimu_ / (r * r * r);
  sc.Bp = xiD * inv4pimu_ / (r * r);
  sc.Ap = fp + sc.B / r;
  sc.App = fpp + sc.Bp / r - sc.B / (r * r);
  sc.Bpp = omD * inv4pimu_ / (r * r * r);
  return sc;
}

RadialScalars KupradzeKernel::scalars_direct(double r, cd s) const {
  const cd w = s * r;
  const double cs = mat_.cs(), cp = mat_.cp();
  const cd zs = w / cs, zp = w / cp;
  const cd zs2 = zs * zs;
  const cd ep = std::exp(-zp);
  const cd es = std::exp(-zs);
  const cd delta = zs - zp;          // = w (1/cs - 1/cp), Re > 0
  const cd em1 = cexpm1(-delta);     // e^{-delta} - 1
  // phi(zs)-phi(zp) = e^{-zp}[ em1 (1+zs) + delta ]
  const cd phiD = ep * (em1 * (1.0 + zs) + delta) / zs2;
  // psi(zp)-psi(zs) = e^{-zp}[ -delta (3 + zp + zs) - em1 (3+3zs+zs^2) ]
  const cd Ps = 3.0 + zs * (3.0 + zs);
  const cd psiD = ep * (-delta * (3.0 + zp + zs) - em1 * Ps) / zs2;
  // xi(zs)-xi(zp) = e^{-zp}[ em1 Q(zs) + delta (9 + 4(zs+zp) + zs^2+zs zp+zp^2) ]
  const cd Qs = 9.0 + zs * (9.0 + zs * (4.0 + zs));
  const cd xiD = ep * (em1 * Qs + delta * (9.0 + 4.0 * (zs + zp) + zs * zs + zs * zp + zp * zp)) / zs2;
  // omega(zp)-omega(zs) = e^{-zp}[ -delta (36 + 17(zp+zs) + 5(zp^2+zp zs+zs^2)
  //                                 + (zp+zs)(zp^2+zs^2)) - em1 R(zs) ]
  const cd Rs = 36.0 + zs * (36.0 + zs * (17.0 + zs * (5.0 + zs)));
  const cd omD = ep * (-delta * (36.0 + 17.0 * (zp + zs) + 5.0 * (zp * zp + zp * zs + zs * zs) +
                                 (zp + zs) * (zp * zp + zs * zs)) -
                       em1 * Rs) / zs2;
  const double pre = inv4pimu_ / r;
  RadialScalars sc;
  sc.r = r;
  sc.A = pre * (es + phiD);
  sc.B = pre * psiD;
  const cd fp = -es * (1.0 + zs) * inv4pimu_ / (r * r);
  const cd fpp = es * (2.0 + zs * (2.0 + zs)) * inv4pimu_ / (r * r * r);
  sc.Bp = xiD * inv4pimu_ / (r * r);
  sc.Ap = fp + sc.B / r;
  sc.App = fpp + sc.Bp / r - sc.B / (r * r);
  sc.Bpp = omD * inv4pimu_ / (r * r * r);
  return sc;
}

RadialScalars KupradzeKernel::static_scalars(double r) const {
  if (!(r > 0.0)) throw KernelDomainError("kernel evaluated at coincident points");
  RadialScalars sc;
  sc.r = r;
  sc.A = kelvin_a0_ / r;
  sc.B = kelvin_b0_ / r;
  sc.Ap = -kelvin_a0_ / (r * r);
  sc.Bp = -kelvin_b0_ / (r * r);
  sc.App = 2.0 * kelvin_a0_ / (r * r * r);
  sc.Bpp = 2.0 * kelvin_b0_ / (r * r * r);
  return sc;
}

RadialScalars KupradzeKernel::delta_scalars(double r, cd s) const {
  check(r, s);
  const cd w = s * r;
  const cd zs = w / mat_.cs();
  if (std::abs(zs) >= 0.5) {
    const RadialScalars d = scalars_direct(r, s);
    const RadialScalars k0 = static_scalars(r);
    return {d.A - k0.A, d.B - k0.B, d.Ap - k0.Ap, d.Bp - k0.Bp,
            d.App - k0.App, d.Bpp - k0.Bpp, r};
  }
  // series of the differences; every numerator starts at w^1 or later
  cd dA = 0, dB = 0, dBp = 0, dBpp = 0, dfp = 0, dfpp = 0;
  cd wk = w;  // w^1
  for (int k = 1; k <= kDelta; ++k) {
    dA += (es_[k] + phiD_[k]) * wk;
    dB += psiD_[k] * wk;
    dBp += xiD_[k] * wk;
    dBpp += omD_[k] * wk;
    dfp += phis_[k] * wk;   // phi(zs) - 1
    dfpp += p2s_[k] * wk;   // p2(zs) e^{-zs} - 2
    wk *= w;
  }
  RadialScalars sc;
  sc.r = r;
  const double r2 = r * r, r3 = r2 * r;
  sc.A = dA * inv4pimu_ / r;
  sc.B = dB * inv4pimu_ / r;
  const cd dfp_full = -dfp * inv4pimu_ / r2;  // f'(s) - f'(0)
  sc.Ap = dfp_full + sc.B / r;
  sc.Bp = dBp * inv4pimu_ / r2;
  sc.App = dfpp * inv4pimu_ / r3 + sc.Bp / r - sc.B / r2;
  sc.Bpp = dBpp * inv4pimu_ / r3;
  return sc;
}

Mat3c KupradzeKernel::e_tensor(const RadialScalars& sc, const Vec3& rhat) {
  Mat3c E = Mat3c::Zero();
  for (int i = 0; i < 3; ++i) {
    E(i, i) = sc.A;
    for (int j = 0; j < 3; ++j) E(i, j) += sc.B * rhat(i) * rhat(j);
  }
  return E;
}

GradTensor KupradzeKernel::grad_tensor(const RadialScalars& sc, const Vec3& rhat) {
  GradTensor G;
  const double r = sc.r;
  const cd B_r = sc.B / r;
  for (int k = 0; k < 3; ++k) {
    Mat3c& Gk = G[k];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        cd v = sc.Bp * rhat(k) * rhat(i) * rhat(j);
        v += B_r * ((i == k ? rhat(j) : cd(0)) + (j == k ? rhat(i) : cd(0)) -
                    2.0 * rhat(k) * rhat(i) * rhat(j));
        if (i == j) v += sc.Ap * rhat(k);
        Gk(i, j) = v;
      }
    }
  }
  return G;
}

SecondTensor KupradzeKernel::second_tensor(const RadialScalars& sc, const Vec3& rhat) {
  SecondTensor T;
  const double r = sc.r, r2 = sc.r * sc.r;
  const cd App = sc.App, Ap = sc.Ap, Bpp = sc.Bpp, Bp = sc.Bp, B = sc.B;
  auto d = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      Mat3c& Tab = T[3 * a + b];
      const double dab = d(a, b);
      const cd cA = App * rhat(a) * rhat(b) + Ap * (dab - rhat(a) * rhat(b)) / r;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          cd t = Bpp * rhat(a) * rhat(b) * rhat(i) * rhat(j);
          t += Bp * ((dab - rhat(b) * rhat(a)) * rhat(i) * rhat(j) +
                     rhat(b) * (d(i, a) - rhat(i) * rhat(a)) * rhat(j) +
                     rhat(b) * rhat(i) * (d(j, a) - rhat(j) * rhat(a))) / r;
          t += (Bp / r - B / r2) * rhat(a) *
               (d(i, b) * rhat(j) + d(j, b) * rhat(i) - 2.0 * rhat(i) * rhat(j) * rhat(b));
          t += (B / r2) * (d(i, b) * (d(j, a) - rhat(j) * rhat(a)) +
                           d(j, b) * (d(i, a) - rhat(i) * rhat(a)));
          t -= 2.0 * (B / r2) * ((d(i, a) - rhat(i) * rhat(a)) * rhat(j) * rhat(b) +
                                 rhat(i) * (d(j, a) - rhat(j) * rhat(a)) * rhat(b) +
                                 rhat(i) * rhat(j) * (dab - rhat(b) * rhat(a)));
          Tab(i, j) = t + (i == j ? cA : cd(0));
        }
      }
    }
  }
  return T;
}

Mat3c KupradzeKernel::traction_from_grad(const GradTensor& G, const Vec3& ny) const {
  const double lam = mat_.lambda, mu = mat_.mu;
  // div over the first matrix index: divE_j = sum_m G[m](m, j)
  Vec3c divE = Vec3c::Zero();
  for (int j = 0; j < 3; ++j)
    for (int m = 0; m < 3; ++m) divE(j) += G[m](m, j);
  Mat3c TK;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      cd v = lam * ny(i) * divE(j);
      for (int k = 0; k < 3; ++k) v += mu * ny(k) * (G[k](i, j) + G[i](k, j));
      TK(i, j) = -v;  // y-derivatives flip the sign of delta-derivatives
    }
  }
  return TK;
}

Mat3c KupradzeKernel::hyper_from_second(const SecondTensor& T4, const Vec3& nx,
                                        const Vec3& ny) const {
  const double lam = mat_.lambda, mu = mat_.mu;
  // dDK[p](i,j) = d/dx_p of the double layer kernel
  std::array<Mat3c, 3> dDK;
  for (int p = 0; p < 3; ++p) {
    Mat3c& M = dDK[p];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        cd v = 0;
        for (int m = 0; m < 3; ++m) v += lam * ny(j) * T4[3 * p + m](m, i);
        for (int k = 0; k < 3; ++k)
          v += mu * ny(k) * (T4[3 * p + k](j, i) + T4[3 * p + j](k, i));
        M(i, j) = -v;
      }
    }
  }
  Mat3c KW;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      cd tr2 = 0;
      for (int l = 0; l < 3; ++l) tr2 += dDK[l](l, j);
      cd v = lam * nx(i) * tr2;
      for (int k = 0; k < 3; ++k) v += mu * nx(k) * (dDK[k](i, j) + dDK[i](k, j));
      KW(i, j) = -v;
    }
  }
  return KW;
}

Mat3c KupradzeKernel::fundamental(const Vec3& x, const Vec3& y, cd s) const {
  const Vec3 d = x - y;
  const double r = d.norm();
  check(r, s);
  return e_tensor(scalars(r, s), d / r);
}

GradTensor KupradzeKernel::gradient(const Vec3& x, const Vec3& y, cd s) const {
  const Vec3 d = x - y;
  const double r = d.norm();
  check(r, s);
  return grad_tensor(scalars(r, s), d / r);
}

Mat3c KupradzeKernel::traction(const Vec3& x, const Vec3& y, cd s, const Vec3& ny) const {
  return traction_from_grad(gradient(x, y, s), ny);
}

Mat3c KupradzeKernel::double_layer(const Vec3& x, const Vec3& y, cd s, const Vec3& ny) const {
  return traction(x, y, s, ny).transpose();
}

Mat3c KupradzeKernel::hypersingular(const Vec3& x, const Vec3& y, cd s, const Vec3& nx,
                                    const Vec3& ny, WVariant variant) const {
  const Vec3 d = x - y;
  const double r = d.norm();
  RadialScalars sc;
  switch (variant) {
    case WVariant::dynamic: sc = scalars(r, s); break;
    case WVariant::kelvin: sc = static_scalars(r); break;
    case WVariant::difference: sc = delta_scalars(r, s); break;
  }
  return hyper_from_second(second_tensor(sc, d / r), nx, ny);
}

Vec3c verify_pde_pointwise(const std::function<Vec3c(const Vec3&)>& field, const Vec3& x, cd s,
                           const IsotropicExterior& mat, double h) {
  const Vec3c u0 = field(x);
  Vec3c lap = Vec3c::Zero();
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e(k) = h;
    lap += (field(x + e) - 2.0 * u0 + field(x - e)) / (h * h);
  }
  auto div_at = [&](const Vec3& z) {
    cd dv = 0;
    for (int k = 0; k < 3; ++k) {
      Vec3 e = Vec3::Zero();
      e(k) = h;
      dv += (field(z + e)(k) - field(z - e)(k)) / (2.0 * h);
    }
    return dv;
  };
  Vec3c graddiv;
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e(k) = h;
    graddiv(k) = (div_at(x + e) - div_at(x - e)) / (2.0 * h);
  }
  const Vec3c dstar = mat.mu * lap + (mat.lambda + mat.mu) * graddiv;
  return -dstar + mat.rho * s * s * u0;
}

}  // namespace elastocq
