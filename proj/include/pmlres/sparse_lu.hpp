#pragma once

#include "pmlres/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>

namespace pmlres {

/// LU factorization of a square complex sparse matrix for repeated solves.
///
/// Matrices with at least `dense_cutoff` rows are factored by UMFPACK with
/// threshold partial pivoting (threshold 0.1) and its default fill-reducing
/// ordering (AMD on the symmetrized pattern for structurally symmetric input,
/// COLAMD otherwise). Smaller ones use dense partial-pivoting LU.
/// Throws SingularMatrixError naming the first column with a zero pivot (or an
/// empty column).
class SparseLU {
 public:
  explicit SparseLU(const SparseMatrix& a, double pivot_threshold = 0.1, int dense_cutoff = 3000);
  ~SparseLU();
  SparseLU(SparseLU&&) noexcept;
  SparseLU& operator=(SparseLU&&) noexcept;

  int size() const { return n_; }
  bool is_dense() const { return dense_; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
  bool dense_ = false;
};

}  // namespace pmlres
