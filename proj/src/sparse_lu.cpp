#include "pmlres/sparse_lu.hpp"

#include "pmlres/error.hpp"

#include <Eigen/UmfPackSupport>

#include <limits>
#include <string>

namespace pmlres {

struct SparseLU::Impl {
  Eigen::PartialPivLU<Eigen::MatrixXcd> dense;
  SparseMatrix matrix;  // UmfPackLU keeps a reference to the factored matrix
  Eigen::UmfPackLU<SparseMatrix> sparse;
};

namespace {

[[noreturn]] void singular(long column) {
  throw SingularMatrixError("sparse_lu: zero pivot in column " + std::to_string(column), column);
}

}  // namespace

SparseLU::SparseLU(const SparseMatrix& a, double pivot_threshold, int dense_cutoff)
    : impl_(std::make_unique<Impl>()), n_(static_cast<int>(a.rows())) {
  if (a.rows() != a.cols()) throw ValidationError("sparse_lu: matrix is not square");
  SparseMatrix& m = impl_->matrix;
  m = a;
  m.makeCompressed();
  for (int c = 0; c < m.outerSize(); ++c) {
    bool any = false;
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
      if (it.value() != Complex(0.0, 0.0)) {
        any = true;
        break;
      }
    }
    if (!any) singular(c);
  }

  dense_ = n_ < dense_cutoff;
  if (dense_) {
    const Eigen::MatrixXcd full = Eigen::MatrixXcd(m);
    m.resize(0, 0);
    impl_->dense.compute(full);
    const Eigen::MatrixXcd& lu = impl_->dense.matrixLU();
    const double scale = full.cwiseAbs().maxCoeff();
    const double tiny = std::numeric_limits<double>::epsilon() * n_ * scale;
    for (int i = 0; i < n_; ++i) {
      if (!(std::abs(lu(i, i)) > tiny)) singular(i);
    }
    return;
  }

  auto& lu = impl_->sparse;
  lu.umfpackControl()(UMFPACK_PIVOT_TOLERANCE) = pivot_threshold;
  lu.umfpackControl()(UMFPACK_SYM_PIVOT_TOLERANCE) = pivot_threshold;
  lu.umfpackControl()(UMFPACK_IRSTEP) = 0;
  lu.analyzePattern(m);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("sparse_lu: symbolic analysis failed", -1);
  lu.factorize(m);
  if (lu.info() != Eigen::Success) {
    // Locate the zero pivot on the diagonal of U and map it back through the
    // column permutation.
    const auto& u = lu.matrixU();
    const auto& q = lu.permutationQ();
    for (int i = 0; i < n_; ++i) {
      if (u.coeff(i, i) == Complex(0.0, 0.0)) singular(q(i));
    }
    throw SingularMatrixError("sparse_lu: numerical factorization failed", -1);
  }
}

SparseLU::~SparseLU() = default;
SparseLU::SparseLU(SparseLU&&) noexcept = default;
SparseLU& SparseLU::operator=(SparseLU&&) noexcept = default;

Eigen::VectorXcd SparseLU::solve(const Eigen::VectorXcd& b) const {
  if (b.size() != n_) throw ValidationError("sparse_lu: right-hand side has the wrong size");
  if (dense_) return impl_->dense.solve(b);
  Eigen::VectorXcd x = impl_->sparse.solve(b);
  return x;
}

}  // namespace pmlres
