#include "pmlres/scaling.hpp"

#include "pmlres/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pmlres {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::affine:
      return "affine";
    case ProfileKind::smoothed_polynomial:
      return "smoothed-polynomial";
    case ProfileKind::constant_after_ramp:
      return "constant-after-ramp";
  }
  return "unknown";
}

ScalingProfile::ScalingProfile(ProfileKind kind, double r1, Complex gamma)
    : kind_(kind), r1_(r1), gamma_(gamma) {
  if (!(r1 > 0.0) || !std::isfinite(r1)) {
    throw ValidationError("scaling: r1 must be positive, got " + std::to_string(r1));
  }
  if (!(gamma.real() >= 0.0) || !(gamma.imag() > 0.0)) {
    throw ValidationError("scaling: gamma needs Re >= 0 and Im > 0");
  }
}

ScalingProfile ScalingProfile::affine(double r1, Complex gamma) {
  return ScalingProfile(ProfileKind::affine, r1, gamma);
}

ScalingProfile ScalingProfile::smoothed_polynomial(double r1, Complex gamma,
                                                   std::vector<double> coefficients) {
  ScalingProfile p(ProfileKind::smoothed_polynomial, r1, gamma);
  if (coefficients.empty()) {
    throw ValidationError("scaling: smoothed-polynomial profile needs coefficients");
  }
  p.coefficients_ = std::move(coefficients);
  return p;
}

ScalingProfile ScalingProfile::constant_after_ramp(double r1, Complex gamma, double width,
                                                   double height) {
  ScalingProfile p(ProfileKind::constant_after_ramp, r1, gamma);
  if (!(width > 0.0)) throw ValidationError("scaling: ramp width must be positive");
  if (!(height > 0.0)) throw ValidationError("scaling: ramp height must be positive");
  p.width_ = width;
  p.height_ = height;
  return p;
}

ScalingProfile ScalingProfile::with_gamma(Complex gamma) const {
  ScalingProfile p = *this;
  if (!(gamma.real() >= 0.0) || !(gamma.imag() > 0.0)) {
    throw ValidationError("scaling: gamma needs Re >= 0 and Im > 0");
  }
  p.gamma_ = gamma;
  return p;
}

std::array<double, 3> ScalingProfile::outer_branch(double r) const {
  switch (kind_) {
    case ProfileKind::affine:
      return {1.0 - r1_ / r, r1_ / (r * r), -2.0 * r1_ / (r * r * r)};
    case ProfileKind::smoothed_polynomial: {
      // alpha~ = p(t), t = 1 - r1/r.
      const double t = 1.0 - r1_ / r;
      const double dt = r1_ / (r * r);
      const double ddt = -2.0 * r1_ / (r * r * r);
      double p = 0.0, dp = 0.0, ddp = 0.0;
      double t_km2 = 0.0;  // t^{k-2}
      double t_km1 = 1.0;  // t^{k-1}
      for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double c = coefficients_[i];
        p += c * t_km1 * t;
        dp += k * c * t_km1;
        ddp += k * (k - 1.0) * c * t_km2;
        t_km2 = t_km1;
        t_km1 *= t;
      }
      return {p, dp * dt, ddp * dt * dt + dp * ddt};
    }
    case ProfileKind::constant_after_ramp: {
      const double t = (r - r1_) / width_;
      if (t >= 1.0) return {height_, 0.0, 0.0};
      const double t2 = t * t;
      const double s = t2 * t * (10.0 - 15.0 * t + 6.0 * t2);
      const double ds = 30.0 * t2 * (1.0 - 2.0 * t + t2);
      const double dds = 60.0 * t * (1.0 - 3.0 * t + 2.0 * t2);
      return {height_ * s, height_ * ds / width_, height_ * dds / (width_ * width_)};
    }
  }
  return {0.0, 0.0, 0.0};
}

double ScalingProfile::alpha_tilde(double r) const {
  return r <= r1_ ? 0.0 : outer_branch(r)[0];
}

double ScalingProfile::alpha(double r) const {
  if (r <= r1_) return 0.0;
  const auto v = outer_branch(r);
  return r * v[1] + v[0];
}

double ScalingProfile::alpha_tilde_limit() const {
  switch (kind_) {
    case ProfileKind::affine:
      return 1.0;
    case ProfileKind::smoothed_polynomial: {
      double sum = 0.0;
      for (double c : coefficients_) sum += c;
      return sum;
    }
    case ProfileKind::constant_after_ramp:
      return height_;
  }
  return 0.0;
}

ScalingState eval_outer(const ScalingProfile& profile, double r) {
  const auto v = profile.outer_branch(r);
  ScalingState s;
  s.r = r;
  s.alpha_tilde = v[0];
  s.alpha = r * v[1] + v[0];
  s.d_tilde = 1.0 + profile.gamma() * s.alpha_tilde;
  s.d = 1.0 + profile.gamma() * s.alpha;
  s.r_tilde = s.d_tilde * r;
  return s;
}

ScalingState eval(const ScalingProfile& profile, double r) {
  if (r <= profile.r1()) {
    ScalingState s;
    s.r = r;
    s.r_tilde = Complex(r, 0.0);
    return s;
  }
  return eval_outer(profile, r);
}

std::pair<Complex, Complex> limits_numeric(const ScalingProfile& profile) {
  const Complex far = eval_outer(profile, 1e6 * profile.r1()).d_tilde;
  const Complex farther = eval_outer(profile, 1e7 * profile.r1()).d_tilde;
  if (std::abs(far - farther) > 1e-8 * std::max(1.0, std::abs(farther))) {
    throw ValidationError("scaling: d~ has not settled at 1e6 r1; limit not accepted");
  }
  return {far / std::abs(far), far};
}

double tau_at(const ScalingProfile& profile, double r) {
  const ScalingState s = eval_outer(profile, r);
  return std::arg(s.d_tilde / s.d);
}

namespace {

constexpr int kSupSamples = 2048;
constexpr double kSupSpan = 1e3;

// Golden-section maximisation of f on [a, b].
template <class F>
double golden_max(F f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  double best = std::max(f(a), f(b));
  for (int it = 0; it < 80 && (b - a) > 1e-14 * b; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return std::max({best, f1, f2});
}

template <class F>
double sampled_sup(const ScalingProfile& profile, F f) {
  const double r1 = profile.r1();
  std::vector<double> radii(kSupSamples);
  std::vector<double> values(kSupSamples);
  for (int k = 0; k < kSupSamples; ++k) {
    radii[k] = r1 * std::pow(kSupSpan, static_cast<double>(k) / (kSupSamples - 1));
    values[k] = f(radii[k]);
  }
  const auto it = std::max_element(values.begin(), values.end());
  const auto k = static_cast<int>(it - values.begin());
  const double lo = radii[std::max(0, k - 1)];
  const double hi = radii[std::min(kSupSamples - 1, k + 1)];
  return std::max(*it, golden_max(f, lo, hi));
}

}  // namespace

std::pair<double, double> tau_range_sampled(const ScalingProfile& profile) {
  const double sup = sampled_sup(profile, [&](double r) { return tau_at(profile, r); });
  const double inf = -sampled_sup(profile, [&](double r) { return -tau_at(profile, r); });
  // tau -> 0 at infinity (when the profile is admissible), so 0 bounds both sides.
  return {std::min(inf, 0.0), std::max(sup, 0.0)};
}

double psi_of(const Medium& medium, double tau_star, double tau) {
  const double re = medium.sigma_min() - (1.0 - std::cos(tau_star)) * medium.sigma_max();
  const double im = -medium.sigma_max() * std::sin(tau);
  return arg_half_open(Complex(re, im));
}

ScalingLimits limits(const ScalingProfile& profile, const Medium& medium) {
  ScalingLimits lim;
  lim.d_inf = 1.0 + profile.gamma() * profile.alpha_tilde_limit();
  lim.d0 = lim.d_inf / std::abs(lim.d_inf);

  if (profile.kind() == ProfileKind::affine) {
    // d = 1 + gamma everywhere beyond r1 and d~ runs from 1 to 1 + gamma.
    lim.tau_star = std::arg(1.0 + profile.gamma());
    lim.tau_min = -lim.tau_star;
    lim.tau_max = 0.0;
    lim.closed_form = true;
  } else {
    std::tie(lim.tau_min, lim.tau_max) = tau_range_sampled(profile);
    lim.tau_star = std::max(-lim.tau_min, lim.tau_max);
  }

  const double re = medium.sigma_min() - (1.0 - std::cos(lim.tau_star)) * medium.sigma_max();
  lim.psi_flagged = !(re > 0.0);
  if (lim.closed_form) {
    // psi decreases in sin(tau) for re > 0; the sup is the limit at tau_min.
    lim.psi_star = psi_of(medium, lim.tau_star, lim.tau_min);
    if (lim.psi_flagged) {
      lim.psi_star = std::max(lim.psi_star, psi_of(medium, lim.tau_star, lim.tau_max));
    }
  } else {
    lim.psi_star = std::max(psi_of(medium, lim.tau_star, lim.tau_min),
                            psi_of(medium, lim.tau_star, lim.tau_max));
    lim.psi_star = std::max(lim.psi_star, sampled_sup(profile, [&](double r) {
                              return psi_of(medium, lim.tau_star, tau_at(profile, r));
                            }));
  }
  return lim;
}

AdmissibilityReport admissible(const ScalingProfile& profile, const Medium& medium, double r0) {
  AdmissibilityReport rep;
  rep.r0 = r0;
  rep.limits = limits(profile, medium);
  rep.anisotropy = anisotropy_degree(medium);
  rep.cos_tau_star = std::cos(rep.limits.tau_star);

  // Structural checks on alpha~.
  const double r1 = profile.r1();
  auto fail1 = [&](std::string msg) { rep.profile_failures.push_back(std::move(msg)); };
  const Complex g = profile.gamma();
  if (!(g.real() >= 0.0 && g.imag() > 0.0)) fail1("gamma must satisfy Re >= 0, Im > 0");
  for (int k = 0; k <= 64; ++k) {
    const double r = r1 * k / 64.0;
    if (profile.alpha_tilde(r) != 0.0) {
      fail1("alpha~ does not vanish at r = " + std::to_string(r));
      break;
    }
  }
  if (std::abs(profile.outer_branch(r1)[0]) > 1e-14) {
    fail1("alpha~ is discontinuous at r1");
  }
  double prev = 0.0;
  double max_abs = 0.0;
  bool positive = true, monotone = true;
  for (int k = 1; k <= kSupSamples; ++k) {
    const double r = r1 * std::pow(1e6, static_cast<double>(k) / kSupSamples);
    const auto v = profile.outer_branch(r);
    if (!(v[0] > 0.0)) positive = false;
    if (v[0] < prev - 1e-14 * std::max(1.0, std::abs(prev)) || v[1] < -1e-12) monotone = false;
    prev = v[0];
    max_abs = std::max({max_abs, std::abs(v[0]), std::abs(r * v[1] + v[0])});
  }
  if (!positive) fail1("alpha~ is not strictly positive beyond r1");
  if (!monotone) fail1("alpha~ is not non-decreasing");
  if (!std::isfinite(max_abs) || max_abs > 1e12) fail1("alpha~ or alpha is unbounded");
  rep.profile_ok = rep.profile_failures.empty();

  rep.interface_threshold = medium.sigma_max() / medium.sigma_min() * r0;
  rep.interface_ok = r1 > rep.interface_threshold;

  rep.cos_tau_ok = rep.cos_tau_star > rep.anisotropy;

  // tau -> 0 and the phases of d~, d settle, sampled at geometric radii.
  auto fail3 = [&](std::string msg) { rep.decay_failures.push_back(std::move(msg)); };
  double last_tau = 0.0;
  double last_dphase = 0.0;
  for (int k = 2; k <= 6; ++k) {
    const double r = r1 * std::pow(10.0, k);
    const auto v = profile.outer_branch(r);
    const ScalingState s = eval_outer(profile, r);
    const double dalpha = r * v[2] + 2.0 * v[1];
    // d/dr arg(d~) = Im(gamma alpha~' / d~), d/dr arg(d) = Im(gamma alpha' / d).
    const double dphase_t = std::abs((g * v[1] / s.d_tilde).imag());
    const double dphase = std::abs((g * dalpha / s.d).imag());
    last_tau = std::abs(std::arg(s.d_tilde / s.d));
    last_dphase = std::max(dphase_t, dphase);
  }
  if (!(last_tau < 1e-4)) fail3("tau does not decay to 0");
  if (!(last_dphase < 1e-6)) fail3("phase derivatives of d~ and d do not decay");
  rep.decay_ok = rep.decay_failures.empty();
  return rep;
}

double arg_half_open(Complex z) {
  const double a = std::arg(z);
  return a >= std::numbers::pi ? -std::numbers::pi : a;
}

bool in_lambda_d0(Complex omega, Complex d0) {
  return std::abs((Complex(0.0, 1.0) * omega * d0).real()) > 1e-10;
}

HatState hat_state(const ScalingProfile& profile, const Medium& medium,
                   const ScalingLimits& lim, double r) {
  HatState h;
  const double r1 = profile.r1();
  if (r > r1) {
    h.alpha_hat = profile.alpha(r);
  } else {
    const auto v = profile.outer_branch(r1);
    h.alpha_hat = r1 * v[1] + v[0];
  }
  h.d_hat = 1.0 + profile.gamma() * h.alpha_hat;
  const Complex d_tilde = eval(profile, r).d_tilde;
  h.tau_hat = std::arg(d_tilde / h.d_hat);
  h.psi_hat = psi_of(medium, lim.tau_star, h.tau_hat);
  return h;
}

Complex t_symbol(const ScalingProfile& profile, const Medium& medium, const ScalingLimits& lim,
                 Complex omega, double r) {
  if (!in_lambda_d0(omega, lim.d0)) {
    throw DomainError("t_symbol: omega is outside Lambda_{d0}");
  }
  const HatState h = hat_state(profile, medium, lim, r);
  const Complex d_tilde = eval(profile, r).d_tilde;
  const Complex base = std::abs(d_tilde) / std::conj(d_tilde);
  const double a = arg_half_open(-omega * omega * lim.d0 * lim.d0);
  const double sign = (a <= 0.0) ? 1.0 : -1.0;
  const Complex symbol = base * std::polar(1.0, sign * h.psi_hat);
  return symbol / std::abs(symbol);
}

Complex t_symbol(const ScalingProfile& profile, const Medium& medium, Complex omega, double r) {
  return t_symbol(profile, medium, limits(profile, medium), omega, r);
}

Complex gamma_of_omega(double c, double omega) {
  if (!(c > 0.0)) throw DomainError("gamma_of_omega: c must be positive");
  return 1.0 / Complex(c, -omega);
}

double min_stabilizing_c(const Medium& medium) {
  const double delta = anisotropy_degree(medium);
  if (delta <= 0.0) return 0.0;
  // 1/sqrt(1 + 1/(4(c^2+c))) > delta  <=>  c^2 + c > delta^2 / (4 (1 - delta^2)).
  const double rhs = delta * delta / (4.0 * (1.0 - delta * delta));
  return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * rhs));
}

}  // namespace pmlres
