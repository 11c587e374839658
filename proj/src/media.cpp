#include "pmlres/media.hpp"

#include "pmlres/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pmlres {

void require_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 3)) {
    throw ValidationError("medium: expected a 2x2 or 3x3 matrix, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw ValidationError("medium: matrix has non-finite entries");
  const double scale = m.cwiseAbs().maxCoeff();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-14 * scale) {
        throw ValidationError("medium: matrix is not symmetric at entry (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      }
    }
  }
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  require_symmetric(m);
  if (m.rows() == 2) {
    const double mean = 0.5 * (m(0, 0) + m(1, 1));
    const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const double radius = std::hypot(half_diff, m(0, 1));
    Eigen::VectorXd ev(2);
    ev << mean - radius, mean + radius;
    return ev;
  }

  // 3x3: the trigonometric cubic formula loses ~1e-11 for clustered
  // eigenvalues, so use the QR-based solver.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Eigen::Matrix3d(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::pair<double, double> spd_extremes(const Eigen::MatrixXd& sigma) {
  const Eigen::VectorXd ev = symmetric_eigenvalues(sigma);
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (!(lo > 0.0)) {
    throw DefinitenessError("medium: matrix is not positive definite (smallest eigenvalue " +
                            std::to_string(lo) + ")");
  }
  return {lo, hi};
}

Medium::Medium(const Eigen::MatrixXd& sigma) : sigma_(sigma) {
  std::tie(sigma_min_, sigma_max_) = spd_extremes(sigma_);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_);
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  sigma_inv_sqrt_ = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  sigma_inv_sqrt_ = 0.5 * (sigma_inv_sqrt_ + sigma_inv_sqrt_.transpose()).eval();
  sigma_inv_ = sigma_.inverse();
  sigma_inv_ = 0.5 * (sigma_inv_ + sigma_inv_.transpose()).eval();
  det_inv_sqrt_ = 1.0 / std::sqrt(sigma_.determinant());
  if (sigma_.isDiagonal(0.0)) {
    // Keep diagonal media exact so that isotropic runs reduce bit-for-bit.
    sigma_inv_sqrt_.setZero(dim(), dim());
    sigma_inv_.setZero(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
      sigma_inv_sqrt_(i, i) = 1.0 / std::sqrt(sigma_(i, i));
      sigma_inv_(i, i) = 1.0 / sigma_(i, i);
    }
  }
}

Medium Medium::isotropic(int dim, double value) {
  return Medium(value * Eigen::MatrixXd::Identity(dim, dim));
}

Medium Medium::diagonal(const Eigen::VectorXd& entries) {
  return Medium(Eigen::MatrixXd(entries.asDiagonal()));
}

double anisotropy_degree(const Medium& medium) {
  return 1.0 - medium.sigma_min() / medium.sigma_max();
}

namespace {

void require_angle(double tau) {
  if (!(std::abs(tau) < 0.5 * std::numbers::pi)) {
    throw DomainError("b_tau: |tau| must be below pi/2, got " + std::to_string(tau));
  }
}

}  // namespace

Eigen::MatrixXcd b_tau(const Eigen::MatrixXd& b, double tau) {
  require_angle(tau);
  require_symmetric(b);
  const Complex plus = std::polar(1.0, tau);
  const Complex minus = std::polar(1.0, -tau);
  Eigen::MatrixXcd out = b.cast<Complex>();
  out(0, 0) *= plus;
  const int n = static_cast<int>(b.rows());
  out.bottomRightCorner(n - 1, n - 1) *= minus;
  return out;
}

RangeBox numerical_range_bounds(const Eigen::MatrixXd& b, double tau) {
  require_angle(tau);
  const auto [lo, hi] = spd_extremes(b);
  const double one_minus_cos = 1.0 - std::cos(tau);
  RangeBox box;
  box.re_lo = lo - one_minus_cos * hi;
  box.re_hi = hi - one_minus_cos * lo;
  box.im_hi = hi * std::abs(std::sin(tau));
  box.im_lo = -box.im_hi;
  return box;
}

}  // namespace pmlres
