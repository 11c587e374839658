#include "pmlres/eig.hpp"

#include "pmlres/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pmlres {

Spectrum spurious_filter(const std::function<Spectrum(double layer_width)>& solve_with_width,
                         const Spectrum& base, const SpuriousOptions& options, Spectrum* stretched_out) {
  if (!(options.stretch > 0.0) || options.stretch == 1.0) {
    throw ValidationError("spurious_filter: stretch must be positive and different from 1");
  }
  if (!(options.radius > 0.0)) throw ValidationError("spurious_filter: radius must be positive");

  Spectrum stretched = solve_with_width(options.stretch * base.provenance.layer_width);
  Spectrum result = base;
  for (const std::string& w : stretched.warnings) result.warnings.push_back("stretched solve: " + w);

  std::vector<double> matched;
  for (Eigenpair& pair : result.pairs) {
    const double merge = 1e-6 * std::abs(pair.omega);
    std::vector<Complex> near;
    for (const Eigenpair& other : stretched.pairs) {
      if (std::abs(other.omega - pair.omega) <= options.radius) near.push_back(other.omega);
    }
    std::sort(near.begin(), near.end(), [&](Complex a, Complex b) {
      return std::abs(a - pair.omega) < std::abs(b - pair.omega);
    });
    std::vector<Complex> distinct;
    for (Complex c : near) {
      const bool dup = std::any_of(distinct.begin(), distinct.end(),
                                   [&](Complex d) { return std::abs(c - d) <= merge; });
      if (!dup) distinct.push_back(c);
    }
    pair.spurious = false;
    pair.ambiguous = false;
    if (distinct.empty()) {
      pair.movement = -1.0;
      pair.spurious = true;
      continue;
    }
    const double d1 = std::abs(distinct[0] - pair.omega);
    pair.movement = d1;
    if (distinct.size() > 1 && std::abs(distinct[1] - pair.omega) < 2.0 * d1) {
      pair.ambiguous = true;
      result.warnings.push_back("spurious_filter: ambiguous match for omega = (" +
                                std::to_string(pair.omega.real()) + ", " +
                                std::to_string(pair.omega.imag()) + ")");
      continue;
    }
    matched.push_back(d1);
  }

  double median = 0.0;
  if (!matched.empty()) {
    std::vector<double> sorted = matched;
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    median = sorted[mid];
    if (sorted.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(sorted.begin(), sorted.begin() + mid));
    }
  }
  // An ambiguous value still moved by at least its nearest-partner distance.
  for (Eigenpair& pair : result.pairs) {
    if (pair.movement < 0.0) continue;
    const double threshold = std::max(options.move_factor * median, options.move_floor * std::abs(pair.omega));
    if (pair.movement > threshold) pair.spurious = true;
  }

  if (stretched_out) *stretched_out = std::move(stretched);
  return result;
}

}  // namespace pmlres
