#include "pmlres/analytic.hpp"

#include "pmlres/error.hpp"
#include "pmlres/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pmlres {

namespace {

// w^T sigma^{-1} w with a fixed summation order, shared by the real and
// complex paths.
template <class Vec>
typename Vec::Scalar quadratic_form(const Vec& w, const Eigen::MatrixXd& sinv) {
  using S = typename Vec::Scalar;
  S q(0);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    S row(0);
    for (Eigen::Index j = 0; j < w.size(); ++j) row += sinv(i, j) * w(j);
    q += w(i) * row;
  }
  return q;
}

void require_dims(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Medium& medium) {
  if (x.size() != medium.dim() || y.size() != medium.dim()) {
    throw ValidationError("analytic: point dimension does not match the medium");
  }
}

void require_interface_radius(const ScalingProfile& profile, const Medium& medium, double r0) {
  const double threshold = medium.sigma_max() / medium.sigma_min() * r0;
  if (!(profile.r1() > threshold)) {
    throw PreconditionError("d_sigma: r1 = " + std::to_string(profile.r1()) +
                            " must exceed (sigma_max/sigma_min) r0 = " + std::to_string(threshold));
  }
}

// Im >= 0 branch; a real non-negative radicand keeps the real root.
Complex upper_sqrt(Complex q) {
  if (q.imag() == 0.0 && q.real() >= 0.0) return Complex(std::sqrt(q.real()), 0.0);
  Complex s = std::sqrt(q);
  if (s.imag() < 0.0) s = -s;
  return s;
}

}  // namespace

double sigma_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Medium& medium) {
  require_dims(x, y, medium);
  const Eigen::VectorXd w = x - y;
  return std::sqrt(quadratic_form(w, medium.sigma_inv()));
}

Complex d_sigma(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const ScalingProfile& profile,
                const Medium& medium, double r0) {
  require_dims(x, y, medium);
  require_interface_radius(profile, medium, r0);
  if (std::abs(y.norm() - r0) > 1e-12 * r0) {
    throw PreconditionError("d_sigma: y is not on the r0-sphere");
  }
  const double rx = x.norm();
  if (rx <= profile.r1()) return Complex(sigma_distance(x, y, medium), 0.0);
  const Complex d_tilde = eval(profile, rx).d_tilde;
  const Eigen::VectorXcd w = d_tilde * x.cast<Complex>() - y.cast<Complex>();
  return upper_sqrt(quadratic_form(w, medium.sigma_inv()));
}

Complex green(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Complex omega,
              const Medium& medium) {
  const double dist = sigma_distance(x, y, medium);
  if (dist == 0.0) throw SingularityError("green: coincident points");
  return medium.det_inv_sqrt() * spherical_h0(omega * dist);
}

Complex scaled_green(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Complex omega,
                     const ScalingProfile& profile, const Medium& medium, double r0) {
  const Complex dist = d_sigma(x, y, profile, medium, r0);
  if (dist == 0.0) throw SingularityError("scaled_green: coincident points");
  return medium.det_inv_sqrt() * spherical_h0(omega * dist);
}

DampingRate damping_rate(Complex omega, const ScalingProfile& profile, const Medium& medium,
                         const Eigen::VectorXd& direction, const Eigen::VectorXd& y) {
  const ScalingLimits lim = limits(profile, medium);
  const double re_iwd0 = (Complex(0.0, 1.0) * omega * lim.d0).real();
  if (!(re_iwd0 < 0.0)) {
    throw PreconditionError("damping_rate: requires Re(i omega d0) < 0");
  }
  if (direction.size() != medium.dim() || direction.norm() == 0.0) {
    throw ValidationError("damping_rate: direction must be a nonzero vector of the medium dimension");
  }
  const Eigen::VectorXd dir = direction.normalized();
  const double r0 = y.norm();

  // Least-squares line through (r, Im(omega d_sigma)) on [10 r1, 20 r1]:
  // -log|exp(i omega d)| = Im(omega d).
  const int samples = 201;
  const double lo = 10.0 * profile.r1();
  const double hi = 20.0 * profile.r1();
  double sr = 0.0, sv = 0.0, srr = 0.0, srv = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = lo + (hi - lo) * i / (samples - 1);
    const double v = (omega * d_sigma(r * dir, y, profile, medium, r0)).imag();
    sr += r;
    sv += v;
    srr += r * r;
    srv += r * v;
  }
  const double n = samples;
  DampingRate out;
  out.measured = (n * srv - sr * sv) / (n * srr - sr * sr);
  out.bound = -re_iwd0 * std::abs(lim.d_inf) / medium.sigma_max();
  return out;
}

namespace {

Complex extension_sum(const CauchyData& data, double r0, const Eigen::Vector3d& x, Complex omega,
                      const ScalingProfile& profile, const Medium& medium, int n_theta,
                      int n_phi) {
  const GaussRule g = gauss_legendre(n_theta);
  const double rx = x.norm();
  const Complex d_tilde = eval(profile, rx).d_tilde;
  const Eigen::Vector3cd x_tilde = d_tilde * x.cast<Complex>();
  const Eigen::Matrix3d sinv = medium.sigma_inv();
  const Eigen::Matrix3d sigma = medium.sigma();
  const double dphi = 2.0 * std::numbers::pi / n_phi;

  Complex sum = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double ct = g.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = dphi * j;
      const Eigen::Vector3d nu(st * std::cos(phi), st * std::sin(phi), ct);
      const Eigen::Vector3d y = r0 * nu;
      const Eigen::Vector3cd w = x_tilde - y.cast<Complex>();
      const Complex dist = upper_sqrt(quadratic_form(w, sinv));
      if (dist == 0.0) throw SingularityError("outgoing_extension: x lies on the sphere");
      const Complex kernel = medium.det_inv_sqrt() * spherical_h0(omega * dist);
      // grad_y G~ = -det omega h0'(omega d) sigma^{-1} w / d, so the conormal
      // derivative nu . sigma grad_y G~ only needs nu . w.
      const Complex nu_w = nu.cast<Complex>().dot(w);
      const Complex conormal_kernel =
          -medium.det_inv_sqrt() * omega * spherical_h0_deriv(omega * dist) * nu_w / dist;
      const Complex u = data.trace(y);
      const Eigen::Vector3cd grad = data.gradient(y);
      const Complex conormal_u = (sigma * nu).cast<Complex>().dot(grad);
      sum += g.weights[i] * dphi * (u * conormal_kernel - kernel * conormal_u);
    }
  }
  return Complex(0.0, 1.0) * omega / (4.0 * std::numbers::pi) * r0 * r0 * sum;
}

}  // namespace

ExtensionValue outgoing_extension(const CauchyData& data, double r0, const Eigen::Vector3d& x,
                                  Complex omega, const ScalingProfile& profile,
                                  const Medium& medium, int n_theta, int n_phi) {
  if (medium.dim() != 3) throw ValidationError("outgoing_extension: 3D media only");
  if (n_theta < 1 || n_phi < 1) throw ValidationError("outgoing_extension: bad quadrature order");
  if (!(x.norm() > r0)) throw DomainError("outgoing_extension: x must lie outside the r0-sphere");
  ExtensionValue out;
  out.value = extension_sum(data, r0, x, omega, profile, medium, n_theta, n_phi);
  const Complex fine = extension_sum(data, r0, x, omega, profile, medium, 2 * n_theta, 2 * n_phi);
  const double scale = std::max(std::abs(out.value), std::abs(fine));
  out.change_on_doubling = scale > 0.0 ? std::abs(fine - out.value) / scale : 0.0;
  out.converged = out.change_on_doubling <= 1e-6;
  return out;
}

}  // namespace pmlres
