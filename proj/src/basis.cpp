#include "pmlres/basis.hpp"

#include "pmlres/error.hpp"

#include <array>
#include <vector>

namespace pmlres {

namespace {

// Value with its gradient in reference coordinates.
struct Dual {
  double v = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

Dual operator*(const Dual& a, const Dual& b) {
  return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
Dual operator*(double s, const Dual& a) { return {s * a.v, s * a.dx, s * a.dy}; }
Dual operator+(const Dual& a, double s) { return {a.v + s, a.dx, a.dy}; }

// Legendre P_0..P_n at a dual argument.
std::vector<Dual> legendre(int n, const Dual& x) {
  std::vector<Dual> p(std::max(n + 1, 1));
  p[0] = {1.0, 0.0, 0.0};
  if (n >= 1) p[1] = x;
  for (int k = 2; k <= n; ++k) {
    const Dual a = ((2.0 * k - 1.0) / k) * (x * p[k - 1]);
    const Dual b = ((k - 1.0) / k) * p[k - 2];
    p[k] = a - b;
  }
  return p;
}

}  // namespace

HierarchicBasis::HierarchicBasis(int p) : p_(p) {
  if (p < 1 || p > 6) throw ValidationError("basis: order must be in [1, 6]");
  size_ = (p + 1) * (p + 2) / 2;
}

void HierarchicBasis::eval(const Eigen::Vector2d& xi, Eigen::VectorXd& values,
                           Eigen::MatrixX2d& grads) const {
  const std::array<Dual, 3> l = {Dual{1.0 - xi.x() - xi.y(), -1.0, -1.0}, Dual{xi.x(), 1.0, 0.0},
                                 Dual{xi.y(), 0.0, 1.0}};
  values.resize(size_);
  grads.resize(size_, 2);
  auto put = [&](int i, const Dual& d) {
    values(i) = d.v;
    grads(i, 0) = d.dx;
    grads(i, 1) = d.dy;
  };
  for (int v = 0; v < 3; ++v) put(v, l[v]);
  if (p_ < 2) return;
  for (int e = 0; e < 3; ++e) {
    const Dual& a = l[e];
    const Dual& b = l[(e + 1) % 3];
    const Dual base = a * b;
    const auto leg = legendre(p_ - 2, b - a);
    for (int k = 2; k <= p_; ++k) put(edge_index(e, k), base * leg[k - 2]);
  }
  if (p_ < 3) return;
  const Dual cube = l[0] * l[1] * l[2];
  const auto pa = legendre(p_ - 3, l[1] - l[0]);
  const auto pb = legendre(p_ - 3, 2.0 * l[2] + (-1.0));
  int index = bubble_offset();
  for (int total = 0; total <= p_ - 3; ++total) {
    for (int i = total; i >= 0; --i) {
      const int j = total - i;
      put(index++, cube * pa[i] * pb[j]);
    }
  }
}

}  // namespace pmlres
