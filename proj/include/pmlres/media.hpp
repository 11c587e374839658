#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>

namespace pmlres {

using Complex = std::complex<double>;

/// Constant anisotropic coefficient matrix of -div(sigma grad u) - omega^2 u.
///
/// Construction validates symmetry (relative 1e-14) and positive
/// definiteness, then caches the spectral extremes and sigma^{-1/2}.
/// Instances are immutable.
class Medium {
 public:
  explicit Medium(const Eigen::MatrixXd& sigma);

  static Medium isotropic(int dim, double value = 1.0);
  static Medium diagonal(const Eigen::VectorXd& entries);

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& sigma_inv() const { return sigma_inv_; }
  const Eigen::MatrixXd& sigma_inv_sqrt() const { return sigma_inv_sqrt_; }
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }
  double det_inv_sqrt() const { return det_inv_sqrt_; }
  bool is_isotropic() const { return sigma_min_ == sigma_max_; }

 private:
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd sigma_inv_;
  Eigen::MatrixXd sigma_inv_sqrt_;
  double sigma_min_ = 0.0;
  double sigma_max_ = 0.0;
  double det_inv_sqrt_ = 0.0;
};

/// Axis-aligned box enclosing the numerical range {x^* B_tau x : |x| = 1}.
struct RangeBox {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  bool contains(Complex z, double tol = 0.0) const {
    return z.real() >= re_lo - tol && z.real() <= re_hi + tol && z.imag() >= im_lo - tol &&
           z.imag() <= im_hi + tol;
  }
};

/// Throws ValidationError unless `m` is square, of size 2 or 3 and symmetric
/// within 1e-14 relative to its largest entry.
void require_symmetric(const Eigen::MatrixXd& m);

/// Smallest and largest eigenvalue of a symmetric 2x2 or 3x3 matrix, computed
/// from the characteristic polynomial. Throws DefinitenessError when the
/// smallest eigenvalue is not strictly positive.
std::pair<double, double> spd_extremes(const Eigen::MatrixXd& sigma);

/// All eigenvalues (ascending) of a symmetric 2x2 or 3x3 matrix in closed form.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// 1 - sigma_min / sigma_max.
double anisotropy_degree(const Medium& medium);

/// B with entry (1,1) multiplied by e^{i tau} and the trailing
/// (dim-1)x(dim-1) block by e^{-i tau}; the coupling row and column keep their
/// real values.
Eigen::MatrixXcd b_tau(const Eigen::MatrixXd& b, double tau);

/// Real and imaginary bounds of x^* B_tau x over complex unit vectors x.
RangeBox numerical_range_bounds(const Eigen::MatrixXd& b, double tau);

}  // namespace pmlres
