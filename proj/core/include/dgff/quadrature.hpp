#pragma once

// Gauss-Legendre quadrature rules, cached per order.

#include <vector>

namespace dgff {

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// Nodes and weights of the n-point rule, computed once and cached.
const GaussLegendre& gauss_legendre(int n);

// Integral of f over [a, b] with the given rule.
template <typename F>
double gl_integrate(const GaussLegendre& rule, double a, double b, F&& f) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

}  // namespace dgff
