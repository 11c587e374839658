#include "pmlres/quadrature.hpp"

#include "pmlres/error.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace pmlres {

namespace {

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 2.0);
  if (n == 1) return rule;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre_pair(n, x);
      const double dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre_pair(n, x);
    const double dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

TriangleRule triangle_rule(int degree) {
  // Duffy map (u, v) -> (u, v (1 - u)) raises the degree in u by one.
  const int n = std::max(1, (degree + 3) / 2);
  const GaussRule g = gauss_legendre(n);
  TriangleRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.nodes[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.nodes[j] + 1.0);
      rule.points.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(0.25 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace pmlres
