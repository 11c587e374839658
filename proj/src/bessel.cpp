#include "pmlres/bessel.hpp"

#include "pmlres/error.hpp"

#include <quadmath.h>

#include <cmath>
#include <numbers>
#include <string>

namespace pmlres {

namespace {

using Quad = __float128;

template <class T>
struct Precision;

template <>
struct Precision<double> {
  static constexpr double eps = 1e-17;
  static double euler() { return std::numbers::egamma; }
  static double pi() { return std::numbers::pi; }
  static std::complex<double> log(const std::complex<double>& z) { return std::log(z); }
};

template <>
struct Precision<Quad> {
  static constexpr double eps = 1e-34;
  static Quad euler() {
    static const Quad value = strtoflt128("0.577215664901532860606512090082402431", nullptr);
    return value;
  }
  static Quad pi() {
    static const Quad value = strtoflt128("3.14159265358979323846264338327950288", nullptr);
    return value;
  }
  static std::complex<Quad> log(const std::complex<Quad>& z) {
    const Quad re = z.real(), im = z.imag();
    return {logq(re * re + im * im) / 2, atan2q(im, re)};
  }
};

template <class T>
using CT = std::complex<T>;

template <class T>
T abs1(const CT<T>& z) {
  // |Re| + |Im|; only used for convergence tests.
  const T re = z.real() < 0 ? -z.real() : z.real();
  const T im = z.imag() < 0 ? -z.imag() : z.imag();
  return re + im;
}

struct JY {
  Complex j;
  Complex y;
  Complex h;
};

// J_n, Y_n and H_n = J_n + i Y_n by the ascending series, summed in T.
template <class T>
JY series(int n, Complex zd) {
  const CT<T> z(static_cast<T>(zd.real()), static_cast<T>(zd.imag()));
  const CT<T> half = z / static_cast<T>(2);
  const CT<T> q = -(half * half);  // -z^2/4

  // (z/2)^n / n!
  CT<T> lead(1, 0);
  for (int k = 1; k <= n; ++k) lead = lead * half / static_cast<T>(k);

  // psi(k+1) + psi(n+k+1), with psi(m+1) = -gamma_E + H_m.
  const T euler = Precision<T>::euler();
  T harm_k = 0;
  T harm_nk = 0;
  for (int m = 1; m <= n; ++m) harm_nk += static_cast<T>(1) / static_cast<T>(m);

  CT<T> term = lead;  // (z/2)^n (-z^2/4)^k / (k! (n+k)!)
  CT<T> sum_j = term;
  CT<T> sum_y = term * (harm_k + harm_nk - 2 * euler);
  const T eps = static_cast<T>(Precision<T>::eps);
  T peak = abs1(term);
  for (int k = 1; k < 400; ++k) {
    term = term * q / (static_cast<T>(k) * static_cast<T>(n + k));
    harm_k += static_cast<T>(1) / static_cast<T>(k);
    harm_nk += static_cast<T>(1) / static_cast<T>(n + k);
    sum_j += term;
    sum_y += term * (harm_k + harm_nk - 2 * euler);
    const T mag = abs1(term);
    if (mag > peak) peak = mag;
    if (mag <= eps * peak && mag <= eps * abs1(sum_j) + eps * eps) break;
  }

  // Finite part: sum_{k<n} (n-k-1)!/k! (z/2)^{2k-n}.
  CT<T> finite(0, 0);
  if (n > 0) {
    CT<T> inv_half_pow(1, 0);  // (z/2)^{-n}
    for (int k = 0; k < n; ++k) inv_half_pow = inv_half_pow / half;
    T fact_a = 1;  // (n-1)!
    for (int m = 2; m <= n - 1; ++m) fact_a *= static_cast<T>(m);
    T fact_b = 1;  // 0!
    CT<T> power = inv_half_pow;
    const CT<T> half_sq = half * half;
    for (int k = 0; k < n; ++k) {
      finite += power * (fact_a / fact_b);
      if (k + 1 < n) {
        fact_a /= static_cast<T>(n - k - 1);
        fact_b *= static_cast<T>(k + 1);
        power = power * half_sq;
      }
    }
  }

  const CT<T> log_half = Precision<T>::log(half);
  const T pi = Precision<T>::pi();
  const CT<T> y = (static_cast<T>(2) * log_half * sum_j - finite - sum_y) / pi;
  const CT<T> h = sum_j + CT<T>(0, 1) * y;

  auto to_double = [](const CT<T>& v) {
    return Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  };
  return {to_double(sum_j), to_double(y), to_double(h)};
}

void check_range(int n, Complex z) {
  if (n < 0 || n > kMaxBesselOrder) {
    throw DomainError("bessel: order " + std::to_string(n) + " outside [0, 20]");
  }
  const double r = std::abs(z);
  if (r == 0.0) throw DomainError("bessel: argument z = 0");
  if (!(r <= kMaxBesselArgument)) {
    throw DomainError("bessel: |z| = " + std::to_string(r) + " exceeds the supported 30");
  }
}

JY evaluate(int n, Complex z) {
  check_range(n, z);
  // Cancellation in the J series costs ~e^{|z| - |Im z|}, in J + iY another
  // e^{2 Im z} in the upper half plane.
  const double loss = std::abs(z) - std::abs(z.imag()) + 2.0 * std::max(z.imag(), 0.0);
  if (loss > 6.0) return series<Quad>(n, z);
  return series<double>(n, z);
}

}  // namespace

Complex bessel_j(int n, Complex z) { return evaluate(n, z).j; }
Complex bessel_y(int n, Complex z) { return evaluate(n, z).y; }
Complex hankel1(int n, Complex z) { return evaluate(n, z).h; }

HankelValues hankel1_all(int n, Complex z) {
  HankelValues out;
  if (n == 0) {
    out.h = hankel1(0, z);
    out.dh = -hankel1(1, z);
  } else {
    const Complex below = hankel1(n - 1, z);
    out.h = hankel1(n, z);
    out.dh = below - static_cast<double>(n) / z * out.h;
  }
  const double nn = static_cast<double>(n) * n;
  out.ddh = -out.dh / z - (1.0 - nn / (z * z)) * out.h;
  return out;
}

Complex hankel1_deriv(int n, Complex z) { return hankel1_all(n, z).dh; }

Complex spherical_h0(Complex z) {
  if (z == 0.0) throw SingularityError("spherical_h0: z = 0");
  const Complex iz(-z.imag(), z.real());
  return std::exp(iz) / iz;
}

Complex spherical_h0_deriv(Complex z) {
  if (z == 0.0) throw SingularityError("spherical_h0: z = 0");
  const Complex iz(-z.imag(), z.real());
  return std::exp(iz) * (z + Complex(0.0, 1.0)) / (z * z);
}

}  // namespace pmlres
