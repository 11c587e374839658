#pragma once

#include "pmlres/fem.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pmlres {

struct Eigenpair {
  Complex omega;              ///< Im(omega) <= 0 branch of sqrt(omega^2)
  Eigen::VectorXcd vector;
  double residual = 0.0;      ///< rayleigh_residual on the pencil
  bool in_lambda_d0 = true;   ///< |Re(i omega d0)| > 1e-10
  bool spurious = false;
  bool ambiguous = false;     ///< two distinct partners after the layer stretch
  double movement = -1.0;     ///< distance to the partner after the stretch, -1 if unmatched
};

struct SpectrumProvenance {
  Complex shift;              ///< omega-plane shift, Im <= 0 branch of sqrt(shift_sq)
  Complex shift_sq;
  int requested = 0;
  int krylov_dim = 0;
  double layer_width = 0.0;
  std::uint64_t seed = 0;
  int restarts = 0;           ///< breakdown restarts
  int iterations = 0;         ///< Krylov-Schur cycles
  int dofs = 0;
};

/// Eigenpairs sorted by |omega - shift|.
struct Spectrum {
  std::vector<Eigenpair> pairs;
  SpectrumProvenance provenance;
  std::vector<std::string> warnings;
};

struct ArnoldiOptions {
  std::uint64_t seed = 1;
  Complex d0{1.0, 0.0};         ///< limiting phase for the Lambda_{d0} flag
  double layer_width = 0.0;     ///< recorded in the provenance only
  double tolerance = 1e-12;     ///< Ritz residual relative to |theta|
  double drop_residual = 1e-6;  ///< pairs above this pencil residual are dropped
  int max_cycles = 200;
  int max_restarts = 3;
  bool keep_vectors = true;
};

/// Eigenvalues omega^2 of K u = omega^2 M u nearest to shift_sq, by Krylov-Schur
/// restarted Arnoldi on v -> (K - shift_sq M)^{-1} M v with full
/// reorthogonalization. Requires krylov_dim >= 2k + 10 (capped at the matrix
/// size). Throws ShiftRejectedError when K - shift_sq M cannot be factored.
Spectrum shift_invert_arnoldi(const AssembledPencil& pencil, Complex shift_sq, int k, int krylov_dim,
                              const ArnoldiOptions& options = {});

/// Im <= 0 branch of the square root.
Complex lower_sqrt(Complex z);

struct SpuriousOptions {
  double stretch = 1.5;       ///< layer width factor of the second solve
  double radius = 0.5;        ///< matching radius in the omega plane
  double move_factor = 10.0;  ///< spurious when movement > move_factor * median movement
  double move_floor = 1e-3;   ///< relative to |omega|; movements below are never spurious
};

/// Re-solves with the layer width scaled by `stretch` and marks base
/// eigenvalues that have no partner within `radius`, or moved by more than
/// move_factor times the median movement of the matched ones, as spurious.
/// A base eigenvalue whose nearest partner at distance d1 has a second distinct
/// candidate closer than 2 d1 (and within the radius) is marked ambiguous and
/// left out of the median; it is still spurious when d1 exceeds the threshold.
/// Candidates closer than 1e-6 |omega| to each other count as one.
Spectrum spurious_filter(const std::function<Spectrum(double layer_width)>& solve_with_width,
                         const Spectrum& base, const SpuriousOptions& options,
                         Spectrum* stretched_out = nullptr);

}  // namespace pmlres
