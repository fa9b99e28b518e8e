#pragma once

#include <functional>
#include <vector>

namespace symmkern {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
QuadratureRule gauss_legendre(int n);

// Composite rule: `rule` mapped onto each panel [edges[i], edges[i+1]].
QuadratureRule composite(const QuadratureRule& rule, const std::vector<double>& edges);

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

}  // namespace symmkern
