#pragma once

// Independent reference computations used as test oracles.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-15) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= tol * a.norm()) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd d = a.diagonal();
  std::sort(d.data(), d.data() + n);
  return d;
}

/// Random symmetric positive definite matrix Q diag(l) Q^T with l in [lo, hi].
inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng, double lo = 0.1, double hi = 3.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), ev(lo, hi);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = u(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd l(n);
  for (int i = 0; i < n; ++i) l(i) = ev(rng);
  Eigen::MatrixXd a = q * l.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

/// Random complex unit vector.
inline Eigen::VectorXcd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x(i) = std::complex<double>(g(rng), g(rng));
  return x / x.norm();
}

/// Thomas algorithm for a tridiagonal system (sub, diag, super).
inline std::vector<double> thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                  std::vector<double> d) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    d[i] -= m * d[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
  return x;
}

}  // namespace oracle
