#pragma once

#include "pmlres/bessel.hpp"
#include "pmlres/media.hpp"
#include "pmlres/scaling.hpp"

#include <Eigen/Dense>

#include <functional>

namespace pmlres {

/// Complex distance sqrt(w^T sigma^{-1} w), w = r~(|x|) x/|x| - y, on the
/// branch Im >= 0. Below r1 the scaling is the identity and the value is the
/// real anisotropic distance |sigma^{-1/2}(x - y)|, computed by the same code
/// path as green() so that both agree bitwise.
///
/// Throws PreconditionError when |y| differs from r0 (relative 1e-12) or when
/// r1 <= (sigma_max / sigma_min) r0.
Complex d_sigma(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const ScalingProfile& profile,
                const Medium& medium, double r0);

/// Real anisotropic distance |sigma^{-1/2}(x - y)|.
double sigma_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Medium& medium);

/// det(sigma)^{-1/2} h0(omega |sigma^{-1/2}(x - y)|). Throws SingularityError for x = y.
Complex green(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Complex omega,
              const Medium& medium);

/// det(sigma)^{-1/2} h0(omega d_sigma(x, y)).
Complex scaled_green(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Complex omega,
                     const ScalingProfile& profile, const Medium& medium, double r0);

struct DampingRate {
  double measured = 0.0;  ///< least-squares slope of Im(omega d_sigma) over [10 r1, 20 r1]
  double bound = 0.0;     ///< -Re(i omega d0) |d_inf| / sigma_max
};

/// Decay rate of |exp(i omega d_sigma(x, y))| along the ray x = r * direction,
/// with y a fixed point on the r0-sphere (r0 = |y|). Throws PreconditionError
/// unless Re(i omega d0) < 0.
DampingRate damping_rate(Complex omega, const ScalingProfile& profile, const Medium& medium,
                         const Eigen::VectorXd& direction, const Eigen::VectorXd& y);

/// Cauchy data of a field on the r0-sphere: value and gradient at a point y.
struct CauchyData {
  std::function<Complex(const Eigen::Vector3d&)> trace;
  std::function<Eigen::Vector3cd(const Eigen::Vector3d&)> gradient;
};

struct ExtensionValue {
  Complex value;
  /// |value(2n_theta, 2n_phi) - value| / |value|; 0 when both vanish.
  double change_on_doubling = 0.0;
  bool converged = true;  ///< change_on_doubling <= 1e-6
};

/// Outgoing extension of 3D Cauchy data from the r0-sphere,
///   (i omega / 4 pi) int u(y) nu.sigma grad_y G~(x, y) - G~(x, y) nu.sigma grad u(y) ds(y),
/// by Gauss-Legendre in cos(theta) times the trapezoidal rule in phi. The value
/// is recomputed with both orders doubled to report convergence.
ExtensionValue outgoing_extension(const CauchyData& data, double r0, const Eigen::Vector3d& x,
                                  Complex omega, const ScalingProfile& profile,
                                  const Medium& medium, int n_theta = 32, int n_phi = 64);

}  // namespace pmlres
