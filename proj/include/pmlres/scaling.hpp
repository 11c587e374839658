#pragma once

#include "pmlres/media.hpp"

#include <array>
#include <string>
#include <vector>

namespace pmlres {

enum class ProfileKind { affine, smoothed_polynomial, constant_after_ramp };

std::string to_string(ProfileKind kind);

/// Radial complex-scaling profile: r~(r) = (1 + gamma * alpha~(r)) r.
///
/// alpha~ vanishes for r <= r1. For r > r1 the shipped kinds are
///   affine               alpha~ = 1 - r1/r
///   smoothed_polynomial  alpha~ = sum_k c_k t^k,  t = 1 - r1/r, k = 1, 2, ...
///   constant_after_ramp  alpha~ = h S((r - r1)/w) on [r1, r1 + w], h beyond,
///                        with the C2 smoothstep S(t) = 10t^3 - 15t^4 + 6t^5.
/// The profile is validated for gamma (Re >= 0, Im > 0) and basic parameters only;
/// the structural conditions are checked by admissible().
class ScalingProfile {
 public:
  static ScalingProfile affine(double r1, Complex gamma);
  static ScalingProfile smoothed_polynomial(double r1, Complex gamma,
                                            std::vector<double> coefficients);
  static ScalingProfile constant_after_ramp(double r1, Complex gamma, double width,
                                            double height = 1.0);

  ProfileKind kind() const { return kind_; }
  double r1() const { return r1_; }
  Complex gamma() const { return gamma_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double ramp_width() const { return width_; }
  double ramp_height() const { return height_; }

  /// Same profile shape with a different damping constant.
  ScalingProfile with_gamma(Complex gamma) const;

  /// alpha~, d alpha~/dr, d^2 alpha~/dr^2 of the r > r1 branch; at r = r1 this
  /// is the right-sided limit.
  std::array<double, 3> outer_branch(double r) const;

  double alpha_tilde(double r) const;
  /// alpha = r alpha~' + alpha~, piecewise.
  double alpha(double r) const;
  /// lim_{r -> inf} alpha~(r).
  double alpha_tilde_limit() const;

 private:
  ScalingProfile(ProfileKind kind, double r1, Complex gamma);

  ProfileKind kind_;
  double r1_;
  Complex gamma_;
  std::vector<double> coefficients_;
  double width_ = 0.0;
  double height_ = 1.0;
};

/// Pointwise scaling quantities at one radius.
struct ScalingState {
  double r = 0.0;
  double alpha_tilde = 0.0;
  double alpha = 0.0;
  Complex d_tilde{1.0, 0.0};
  Complex d{1.0, 0.0};
  Complex r_tilde{0.0, 0.0};
};

ScalingState eval(const ScalingProfile& profile, double r);

/// Right-sided evaluation: the r > r1 formulas extended to r = r1.
ScalingState eval_outer(const ScalingProfile& profile, double r);

struct ScalingLimits {
  Complex d0;            ///< lim d~/|d~|, unit modulus
  Complex d_inf;         ///< lim d~
  double tau_star = 0.0; ///< sup_{r > r1} |arg(d~/d)|
  double tau_min = 0.0;  ///< inf_{r > r1} arg(d~/d)
  double tau_max = 0.0;  ///< sup_{r > r1} arg(d~/d)
  double psi_star = 0.0;
  /// sigma_min - (1 - cos tau*) sigma_max <= 0: psi is the argument of a number
  /// with non-positive real part.
  bool psi_flagged = false;
  bool closed_form = false;
};

/// d0, d_inf and the angle suprema of a profile in a medium.
ScalingLimits limits(const ScalingProfile& profile, const Medium& medium);

/// d0 and d_inf by evaluation at 1e6 r1, accepted when the value at 1e7 r1
/// agrees within 1e-8. Throws ValidationError when it does not.
std::pair<Complex, Complex> limits_numeric(const ScalingProfile& profile);

/// tau(r) = arg(d~/d) on the outer branch.
double tau_at(const ScalingProfile& profile, double r);

/// Extremes of tau over (r1, 1e3 r1] by 2048-point geometric sampling plus
/// golden-section refinement. Returns {inf tau, sup tau}.
std::pair<double, double> tau_range_sampled(const ScalingProfile& profile);

/// psi = arg(sigma_min - (1 - cos tau*) sigma_max - i sigma_max sin(tau)).
double psi_of(const Medium& medium, double tau_star, double tau);

struct AdmissibilityReport {
  bool profile_ok = false;  ///< profile structure (vanishing, continuity, monotone, bounded)
  bool interface_ok = false;  ///< r1 > (sigma_max/sigma_min) r0
  bool cos_tau_ok = false;     ///< cos tau* > 1 - sigma_min/sigma_max
  bool decay_ok = false;  ///< tau -> 0 and phase derivatives decay
  std::vector<std::string> profile_failures;
  std::vector<std::string> decay_failures;
  double r0 = 0.0;
  double interface_threshold = 0.0;
  double cos_tau_star = 0.0;
  double anisotropy = 0.0;
  ScalingLimits limits;

  /// True when every flag holds.
  bool all() const { return profile_ok && interface_ok && cos_tau_ok && decay_ok; }
};

AdmissibilityReport admissible(const ScalingProfile& profile, const Medium& medium, double r0);

/// Clamped quantities used by the T(omega) symbol.
struct HatState {
  double alpha_hat = 0.0;
  Complex d_hat{1.0, 0.0};
  double tau_hat = 0.0;
  double psi_hat = 0.0;
};

HatState hat_state(const ScalingProfile& profile, const Medium& medium,
                   const ScalingLimits& lim, double r);

/// Argument in [-pi, pi).
double arg_half_open(Complex z);

/// omega in Lambda_{d0}: |Re(i omega d0)| > 1e-10.
bool in_lambda_d0(Complex omega, Complex d0);

/// Unit-modulus multiplier (|d~| / conj(d~)) e^{+-i psi_hat} of T(omega) at
/// radius r. Throws DomainError for omega outside Lambda_{d0}.
Complex t_symbol(const ScalingProfile& profile, const Medium& medium, Complex omega, double r);
Complex t_symbol(const ScalingProfile& profile, const Medium& medium, const ScalingLimits& lim,
                 Complex omega, double r);

/// Frequency-dependent damping constant 1/(c - i omega).
Complex gamma_of_omega(double c, double omega);

/// Smallest c >= 0 with cos(arctan(1/(2 sqrt(c^2 + c)))) > 1 - sigma_min/sigma_max.
double min_stabilizing_c(const Medium& medium);

}  // namespace pmlres
