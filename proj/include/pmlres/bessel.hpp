#pragma once

#include <complex>

namespace pmlres {

using Complex = std::complex<double>;

/// Integer-order Bessel and Hankel functions of complex argument.
///
/// Evaluated from the ascending series only (J_n directly, Y_n in the
/// log-plus-series form), on the supported range 0 < |z| <= 30, 0 <= n <= 20.
/// Arguments where double-precision summation would lose more than ~3 digits
/// to cancellation are summed in quad precision. Outside the range a
/// DomainError is thrown; there is no asymptotic fallback.
inline constexpr int kMaxBesselOrder = 20;
inline constexpr double kMaxBesselArgument = 30.0;

Complex bessel_j(int n, Complex z);
Complex bessel_y(int n, Complex z);
Complex hankel1(int n, Complex z);

/// (H_n^{(1)})'(z) = H_{n-1}^{(1)}(z) - (n/z) H_n^{(1)}(z), and -H_1^{(1)} for n = 0.
Complex hankel1_deriv(int n, Complex z);

struct HankelValues {
  Complex h;    ///< H_n^{(1)}(z)
  Complex dh;   ///< first derivative
  Complex ddh;  ///< second derivative, from Bessel's equation
};

/// H_n^{(1)} with its first two derivatives from one pair of series evaluations.
HankelValues hankel1_all(int n, Complex z);

/// Spherical Hankel function h_0^{(1)}(z) = e^{iz} / (iz). Throws
/// SingularityError at z = 0.
Complex spherical_h0(Complex z);

/// d/dz h_0^{(1)}(z) = e^{iz} (z + i) / z^2.
Complex spherical_h0_deriv(Complex z);

}  // namespace pmlres
