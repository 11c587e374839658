#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pmlres/analytic.hpp"
#include "pmlres/error.hpp"

#include <cmath>
#include <random>

using namespace pmlres;

namespace {

const Complex I(0.0, 1.0);

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Outgoing point source det(sigma)^{-1/2} h0(omega |sigma^{-1/2}(y - z)|) and its gradient.
CauchyData point_source(const Medium& m, const Eigen::Vector3d& z, Complex omega) {
  const Eigen::Matrix3d s = m.sigma_inv_sqrt();
  const Eigen::Matrix3d sinv = s * s;
  const double det = m.det_inv_sqrt();
  CauchyData data;
  data.trace = [=](const Eigen::Vector3d& y) { return det * spherical_h0(omega * (s * (y - z)).norm()); };
  data.gradient = [=](const Eigen::Vector3d& y) {
    const Eigen::Vector3d w = y - z;
    const double d = (s * w).norm();
    const Complex f = det * omega * spherical_h0_deriv(omega * d) / d;
    return Eigen::Vector3cd((sinv * w).cast<Complex>() * f);
  };
  return data;
}

}  // namespace

TEST_CASE("d_sigma is the real anisotropic distance below r1") {
  const ScalingProfile p = ScalingProfile::affine(5.0, 8.0 * I);
  const Medium m = Medium::diagonal(Eigen::Vector2d(0.25, 1.0));
  const Eigen::VectorXd y = vec({0.0, 1.0});
  for (const Eigen::VectorXd& x : {vec({1.0, 0.5}), vec({-2.0, 1.5}), vec({0.3, -4.9})}) {
    const Complex d = d_sigma(x, y, p, m, 1.0);
    CHECK(d.imag() == 0.0);
    CHECK(d.real() == sigma_distance(x, y, m));
    CHECK(scaled_green(x, y, 1.3 - 0.2 * I, p, m, 1.0) == green(x, y, 1.3 - 0.2 * I, m));
  }
  CHECK(sigma_distance(vec({2.0, 0.0}), vec({0.0, 0.0}), m) == doctest::Approx(4.0));
}

TEST_CASE("d_sigma squares to w^T sigma^-1 w on the upper branch") {
  const ScalingProfile p = ScalingProfile::affine(1.5, Complex(0.5, 4.0));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> rad(0.0, 20.0);
  for (int dim : {2, 3}) {
    const Medium m = dim == 2 ? Medium::diagonal(Eigen::Vector2d(0.8, 1.0))
                              : Medium::diagonal(Eigen::Vector3d(0.9, 1.0, 1.1));
    for (int i = 0; i < 2000; ++i) {
      Eigen::VectorXd dir(dim), ydir(dim);
      for (int k = 0; k < dim; ++k) dir(k) = g(rng), ydir(k) = g(rng);
      const Eigen::VectorXd x = rad(rng) * dir.normalized();
      const Eigen::VectorXd y = 1.0 * ydir.normalized();
      if ((x - y).norm() < 1e-6) continue;
      const Complex d = d_sigma(x, y, p, m, 1.0);
      const Eigen::VectorXcd w = eval(p, x.norm()).d_tilde * x.cast<Complex>() - y.cast<Complex>();
      const Eigen::MatrixXd sinv = m.sigma().inverse();
      const Complex q = (w.transpose() * sinv.cast<Complex>() * w)(0, 0);
      CHECK(d.imag() >= 0.0);
      CHECK(std::abs(d * d - q) <= 1e-12 * std::max(1.0, std::abs(q)));
    }
  }
}

TEST_CASE("d_sigma preconditions") {
  const ScalingProfile p = ScalingProfile::affine(1.5, 8.0 * I);
  CHECK_THROWS_AS(d_sigma(vec({2.0, 0.0}), vec({0.0, 0.9}), p, Medium::isotropic(2), 1.0), PreconditionError);
  // sigma_max / sigma_min = 4 requires r1 > 4 r0.
  CHECK_THROWS_AS(
      d_sigma(vec({2.0, 0.0}), vec({0.0, 1.0}), p, Medium::diagonal(Eigen::Vector2d(0.25, 1.0)), 1.0),
      PreconditionError);
  CHECK_THROWS_AS(green(vec({1.0, 1.0}), vec({1.0, 1.0}), 1.0, Medium::isotropic(2)), SingularityError);
}

TEST_CASE("isotropic damping reaches the bound 8") {
  const ScalingProfile p = ScalingProfile::affine(1.5, 8.0 * I);
  const Medium m = Medium::isotropic(2);
  for (int j = 0; j < 8; ++j) {
    const double a = 2.0 * M_PI * j / 8.0;
    const DampingRate r = damping_rate(1.0, p, m, vec({std::cos(a), std::sin(a)}), vec({1.0, 0.0}));
    CHECK(r.bound == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(r.measured >= 0.95 * r.bound);
  }
}

TEST_CASE("anisotropic damping and the half-plane precondition") {
  const ScalingProfile p = ScalingProfile::affine(6.0, 8.0 * I);
  const Medium m = Medium::diagonal(Eigen::Vector2d(0.25, 1.0));
  const DampingRate r = damping_rate(1.0, p, m, vec({0.6, 0.8}), vec({1.0, 0.0}));
  CHECK(r.bound == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(r.measured >= 0.95 * r.bound);
  // Re(i omega d0) = 0 for omega = -conj(d0).
  const Complex d0 = Complex(1, 8) / std::sqrt(65.0);
  CHECK_THROWS_AS(damping_rate(-std::conj(d0), p, m, vec({1.0, 0.0}), vec({1.0, 0.0})),
                  PreconditionError);
}

TEST_CASE("outgoing_extension of zero data vanishes") {
  CauchyData zero;
  zero.trace = [](const Eigen::Vector3d&) { return Complex(0.0); };
  zero.gradient = [](const Eigen::Vector3d&) { return Eigen::Vector3cd::Zero().eval(); };
  const ExtensionValue e = outgoing_extension(zero, 1.0, Eigen::Vector3d(2.0, 0.5, 0.0), 1.0,
                                              ScalingProfile::affine(1.5, 2.0 * I), Medium::isotropic(3));
  CHECK(e.value == Complex(0.0));
  CHECK(e.change_on_doubling == 0.0);
  CHECK(e.converged);
}

TEST_CASE("outgoing_extension reproduces an interior point source") {
  const Complex omega(1.2, -0.1);
  const ScalingProfile p = ScalingProfile::affine(2.0, 2.0 * I);
  for (const Medium& m : {Medium::isotropic(3), Medium::diagonal(Eigen::Vector3d(0.8, 1.0, 0.9))}) {
    const Eigen::Vector3d z(0.1, -0.2, 0.15);
    const CauchyData data = point_source(m, z, omega);
    const Eigen::Vector3d x(1.2, 0.3, -0.4);
    const ExtensionValue e = outgoing_extension(data, 1.0, x, omega, p, m);
    CHECK(e.converged);
    const Complex expected = data.trace(x);
    CHECK(std::abs(e.value - expected) <= 1e-6 * std::abs(expected));
  }
}

TEST_CASE("outgoing_extension beyond r1 gives the scaled field") {
  const Complex omega(1.0, -0.05);
  const ScalingProfile p = ScalingProfile::affine(1.5, Complex(0.0, 1.0));
  const Medium m = Medium::isotropic(3);
  const CauchyData data = point_source(m, Eigen::Vector3d::Zero(), omega);
  for (double r : {2.0, 3.0}) {
    const Eigen::Vector3d x = r * Eigen::Vector3d(1.0, 1.0, 1.0).normalized();
    const ExtensionValue e = outgoing_extension(data, 1.0, x, omega, p, m);
    const Complex expected = spherical_h0(omega * eval(p, r).r_tilde);
    CAPTURE(r);
    CHECK(std::abs(e.value - expected) <= 1e-6 * std::abs(expected));
  }
  CHECK_THROWS_AS(outgoing_extension(data, 1.0, Eigen::Vector3d(0.5, 0, 0), omega, p, m), DomainError);
  CHECK_THROWS_AS(outgoing_extension(data, 1.0, Eigen::Vector3d(2, 0, 0), omega, p, Medium::isotropic(2)),
                  ValidationError);
}
