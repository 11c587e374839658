#include "pmlres/eig.hpp"

#include "pmlres/error.hpp"
#include "pmlres/sparse_lu.hpp"

#include <Eigen/Eigenvalues>
#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace pmlres {

Complex lower_sqrt(Complex z) {
  Complex s = std::sqrt(z);
  if (s.imag() > 0.0) s = -s;
  return s;
}

namespace {

// Givens rotation with real cosine: [c s; -conj(s) c] [f; g] = [r; 0].
void lartg(Complex f, Complex g, double& c, Complex& s) {
  if (g == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (f == 0.0) {
    c = 0.0;
    s = std::conj(g) / std::abs(g);
    return;
  }
  const double af = std::abs(f), ag = std::abs(g);
  const double norm = std::hypot(af, ag);
  c = af / norm;
  s = (f / af) * std::conj(g) / norm;
}

// x <- c x + s y, y <- c y - conj(s) x, elementwise.
template <class X, class Y>
void rot(X&& x, Y&& y, double c, Complex s) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Complex xi = x(i), yi = y(i);
    x(i) = c * xi + s * yi;
    y(i) = c * yi - std::conj(s) * xi;
  }
}

// Swap diagonal entries k and k+1 of the upper triangular T, updating U.
void swap_schur(Eigen::MatrixXcd& t, Eigen::MatrixXcd& u, Eigen::Index k) {
  const Eigen::Index n = t.rows();
  const Complex t11 = t(k, k), t22 = t(k + 1, k + 1);
  double c;
  Complex s;
  lartg(t(k, k + 1), t22 - t11, c, s);
  if (k + 2 < n) {
    rot(t.row(k).tail(n - k - 2).transpose(), t.row(k + 1).tail(n - k - 2).transpose(), c, s);
  }
  if (k > 0) rot(t.col(k).head(k), t.col(k + 1).head(k), c, std::conj(s));
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  rot(u.col(k), u.col(k + 1), c, std::conj(s));
}

// Reorders the Schur form so |T(i,i)| is non-increasing.
void sort_schur(Eigen::MatrixXcd& t, Eigen::MatrixXcd& u) {
  const Eigen::Index n = t.rows();
  for (Eigen::Index pos = 0; pos < n; ++pos) {
    Eigen::Index best = pos;
    for (Eigen::Index j = pos + 1; j < n; ++j) {
      if (std::abs(t(j, j)) > std::abs(t(best, best))) best = j;
    }
    for (Eigen::Index j = best; j > pos; --j) swap_schur(t, u, j - 1);
  }
}

Eigen::VectorXcd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

// h = V(:, 0:j)^H w, w <- w - V(:, 0:j) h.
void project(const Eigen::MatrixXcd& v, Eigen::Index j, Eigen::VectorXcd& w, Eigen::VectorXcd& h) {
  const Complex one(1.0, 0.0), zero(0.0, 0.0), minus(-1.0, 0.0);
  const auto n = static_cast<blasint>(v.rows());
  h.resize(j);
  cblas_zgemv(CblasColMajor, CblasConjTrans, n, static_cast<blasint>(j), &one, v.data(), n, w.data(), 1,
              &zero, h.data(), 1);
  cblas_zgemv(CblasColMajor, CblasNoTrans, n, static_cast<blasint>(j), &minus, v.data(), n, h.data(), 1,
              &one, w.data(), 1);
}

// Classical Gram-Schmidt against the first j columns of V, repeated once
// when the norm drops below 1/sqrt(2) of its previous value.
Eigen::VectorXcd orthogonalize(const Eigen::MatrixXcd& v, Eigen::Index j, Eigen::VectorXcd& w) {
  Eigen::VectorXcd h, h2;
  const double before = w.norm();
  project(v, j, w, h);
  if (w.norm() < M_SQRT1_2 * before) {
    project(v, j, w, h2);
    h += h2;
  }
  return h;
}

// C = A(:, 0:k) * B(0:k, 0:cols).
Eigen::MatrixXcd multiply(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, Eigen::Index k,
                          Eigen::Index cols) {
  const Complex one(1.0, 0.0), zero(0.0, 0.0);
  Eigen::MatrixXcd c(a.rows(), cols);
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, static_cast<blasint>(a.rows()),
              static_cast<blasint>(cols), static_cast<blasint>(k), &one, a.data(),
              static_cast<blasint>(a.rows()), b.data(), static_cast<blasint>(b.rows()), &zero, c.data(),
              static_cast<blasint>(a.rows()));
  return c;
}

}  // namespace

Spectrum shift_invert_arnoldi(const AssembledPencil& pencil, Complex shift_sq, int k, int krylov_dim,
                              const ArnoldiOptions& options) {
  const Eigen::Index n = pencil.K.rows();
  if (pencil.K.cols() != n || pencil.M.rows() != n || pencil.M.cols() != n) {
    throw ValidationError("arnoldi: K and M must be square of equal size");
  }
  if (k < 1 || k > n) throw ValidationError("arnoldi: requested count must be in [1, n]");
  if (krylov_dim < 2 * k + 10) throw ValidationError("arnoldi: krylov_dim must be at least 2k + 10");
  const Eigen::Index m = std::min<Eigen::Index>(krylov_dim, n);

  Spectrum spectrum;
  SpectrumProvenance& prov = spectrum.provenance;
  prov.shift_sq = shift_sq;
  prov.shift = lower_sqrt(shift_sq);
  prov.requested = k;
  prov.krylov_dim = krylov_dim;
  prov.layer_width = options.layer_width;
  prov.seed = options.seed;
  prov.dofs = static_cast<int>(n);

  std::unique_ptr<SparseLU> lu;
  try {
    const SparseMatrix shifted = pencil.K - shift_sq * pencil.M;
    lu = std::make_unique<SparseLU>(shifted);
  } catch (const SingularMatrixError& e) {
    throw ShiftRejectedError(std::string("arnoldi: shift rejected, ") + e.what());
  }
  auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    return lu->solve(pencil.M * x);
  };

  std::mt19937_64 rng(options.seed);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, m + 1);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
  {
    Eigen::VectorXcd start = random_vector(n, rng);
    v.col(0) = start / start.norm();
  }

  Eigen::Index kept = 0;
  Eigen::Index size = m;
  bool invariant = false;
  Eigen::MatrixXcd hm;
  for (int cycle = 0; cycle < options.max_cycles; ++cycle) {
    prov.iterations = cycle + 1;
    size = m;
    invariant = false;
    for (Eigen::Index j = kept; j < m; ++j) {
      Eigen::VectorXcd w = apply(v.col(j));
      const Eigen::VectorXcd coeff = orthogonalize(v, j + 1, w);
      h.col(j).head(j + 1) = coeff;
      const double beta = w.norm();
      if (beta <= 1e-13 * coeff.norm()) {
        if (j + 1 >= k || j + 1 == n) {
          // Invariant subspace: the Ritz values of H are exact.
          h(j + 1, j) = 0.0;
          size = j + 1;
          invariant = true;
          break;
        }
        if (prov.restarts >= options.max_restarts) {
          throw Error("arnoldi: repeated breakdown before reaching the requested count");
        }
        ++prov.restarts;
        Eigen::VectorXcd fresh = random_vector(n, rng);
        orthogonalize(v, j + 1, fresh);
        h(j + 1, j) = 0.0;
        v.col(j + 1) = fresh / fresh.norm();
        continue;
      }
      h(j + 1, j) = beta;
      v.col(j + 1) = w / beta;
    }

    hm = h.topLeftCorner(size, size);
    const double beta = invariant ? 0.0 : std::abs(h(size, size - 1));

    // Convergence of the k largest Ritz values theta.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hm);
    std::vector<Eigen::Index> order(size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
    });
    const int wanted = static_cast<int>(std::min<Eigen::Index>(k, size));
    int converged = 0;
    for (int i = 0; i < wanted; ++i) {
      const Eigen::Index idx = order[i];
      const Eigen::VectorXcd y = es.eigenvectors().col(idx).normalized();
      const double ritz = beta * std::abs(y(size - 1));
      if (ritz <= options.tolerance * std::abs(es.eigenvalues()(idx))) ++converged;
    }
    if (invariant || converged == wanted || size == n || cycle + 1 == options.max_cycles) {
      if (!invariant && converged < wanted && size < n) {
        spectrum.warnings.push_back("arnoldi: " + std::to_string(wanted - converged) +
                                    " Ritz values not converged after " +
                                    std::to_string(prov.iterations) + " cycles");
      }
      for (int i = 0; i < wanted; ++i) {
        const Eigen::Index idx = order[i];
        const Complex theta = es.eigenvalues()(idx);
        if (theta == 0.0) continue;
        Eigenpair pair;
        pair.omega = lower_sqrt(shift_sq + 1.0 / theta);
        Eigen::VectorXcd x = v.leftCols(size) * es.eigenvectors().col(idx);
        x /= x.norm();
        pair.residual = rayleigh_residual(pencil, pair.omega, x);
        pair.in_lambda_d0 = in_lambda_d0(pair.omega, options.d0);
        if (!(pair.residual <= options.drop_residual)) {
          spectrum.warnings.push_back("arnoldi: dropped omega = (" + std::to_string(pair.omega.real()) +
                                      ", " + std::to_string(pair.omega.imag()) +
                                      ") with residual " + std::to_string(pair.residual));
          continue;
        }
        if (options.keep_vectors) pair.vector = std::move(x);
        spectrum.pairs.push_back(std::move(pair));
      }
      break;
    }

    // Thick restart: keep the Schur vectors of the largest Ritz values.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(hm);
    Eigen::MatrixXcd t = schur.matrixT();
    Eigen::MatrixXcd u = schur.matrixU();
    sort_schur(t, u);
    const Eigen::Index keep = std::min<Eigen::Index>(size - 1, k + (size - k) / 2);
    const Eigen::MatrixXcd basis = multiply(v, u, size, keep);
    const Eigen::VectorXcd next = v.col(size);
    const Eigen::RowVectorXcd tail = h(size, size - 1) * u.row(size - 1).head(keep);
    v.leftCols(keep) = basis;
    v.col(keep) = next;
    h.setZero();
    h.topLeftCorner(keep, keep) = t.topLeftCorner(keep, keep);
    h.row(keep).head(keep) = tail;
    kept = keep;
  }

  const Complex shift = prov.shift;
  std::stable_sort(spectrum.pairs.begin(), spectrum.pairs.end(),
                   [&](const Eigenpair& a, const Eigenpair& b) {
                     return std::abs(a.omega - shift) < std::abs(b.omega - shift);
                   });
  return spectrum;
}

}  // namespace pmlres
