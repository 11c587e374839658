#pragma once

#include <Eigen/Dense>

namespace pmlres {

/// Hierarchic H1 basis of order p (1..6) on the reference triangle
/// (0,0), (1,0), (0,1) with barycentrics l0 = 1 - xi - eta, l1 = xi, l2 = eta.
///
/// Local ordering:
///   3 vertex functions        l_v
///   3 (p-1) edge functions    l_a l_b P_{k-2}(l_b - l_a), k = 2..p, edge e = (e, e+1 mod 3)
///   (p-1)(p-2)/2 bubbles      l0 l1 l2 P_i(l1 - l0) P_j(2 l2 - 1), i + j <= p - 3
/// Edge functions are oriented from local vertex a to b; reversing an edge
/// multiplies mode k by (-1)^k.
class HierarchicBasis {
 public:
  explicit HierarchicBasis(int p);

  int order() const { return p_; }
  int size() const { return size_; }
  int edge_modes() const { return p_ - 1; }
  int bubble_count() const { return (p_ - 1) * (p_ - 2) / 2; }

  /// Local index of mode k (2..p) on edge e.
  int edge_index(int e, int k) const { return 3 + e * (p_ - 1) + (k - 2); }
  int bubble_offset() const { return 3 + 3 * (p_ - 1); }

  void eval(const Eigen::Vector2d& xi, Eigen::VectorXd& values, Eigen::MatrixX2d& grads) const;

 private:
  int p_;
  int size_;
};

}  // namespace pmlres
