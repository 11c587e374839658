#pragma once

#include <array>
#include <vector>

namespace pmlres {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Quadrature rule on the reference triangle (0,0), (1,0), (0,1).
struct TriangleRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;  ///< sum to 1/2
  int degree = 0;
};

/// Collapsed (Duffy) tensor rule exact for polynomials of total degree `degree`.
TriangleRule triangle_rule(int degree);

}  // namespace pmlres
