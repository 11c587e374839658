#pragma once

#include "pmlres/bessel.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace pmlres {

/// Closed rectangle in the complex plane.
struct SearchBox {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  bool contains(Complex z, double tol = 0.0) const {
    return z.real() >= re_lo - tol && z.real() <= re_hi + tol && z.imag() >= im_lo - tol &&
           z.imag() <= im_hi + tol;
  }
};

/// A zero of (H_n^{(1)})'.
struct ResonanceReference {
  int n = 0;
  int k = 0;  ///< 1-based rank by |Re root| within order n
  Complex root;
  double residual = 0.0;  ///< |(H_n^{(1)})'(root)|
};

/// Number of zeros of (H_n^{(1)})' inside `box`, by adaptive Gauss-Kronrod
/// integration of the logarithmic derivative around the boundary. Throws
/// DomainError when the box touches z = 0, crosses the branch cut on the
/// negative real axis or leaves |z| <= 30, and IncompleteSearchError when the
/// winding number is not close to an integer (a zero on or near the contour).
int count_hankel_deriv_zeros(int n, const SearchBox& box);

/// Newton iteration for (H_n^{(1)})' = 0 from `seed`. Returns the root when the
/// step falls below 1e-14 |z| with residual < 1e-10, otherwise nothing.
std::optional<Complex> newton_hankel_deriv(int n, Complex seed, int max_iterations = 60);

/// All zeros of (H_n^{(1)})', n = 0..n_max, inside `box`, ordered by (n, Re).
/// Each order is counted by the argument principle and located by Newton from
/// a seed grid that is refined until the counts agree; throws
/// IncompleteSearchError when they still disagree after refinement.
std::vector<ResonanceReference> find_disk_neumann_references(int n_max, const SearchBox& box);

/// The `count` references with the smallest |Im root| (ties by Re), in that
/// order: the least damped resonances, which dominate a computed spectrum near
/// the real axis.
std::vector<ResonanceReference> leading_references(const std::vector<ResonanceReference>& refs,
                                                   int count);

/// CSV with header n,k,re,im,residual and 17 significant digits.
void write_references_csv(std::ostream& out, const std::vector<ResonanceReference>& refs);
std::vector<ResonanceReference> read_references_csv(std::istream& in);

}  // namespace pmlres
