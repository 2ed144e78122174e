#include "qdisc/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "qdisc/errors.hpp"

namespace qdisc {

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int n = 2; n <= order; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int n = 2; n <= order; ++n) {
      const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    if (order == 1) p0 = 1.0;
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] onto [0, 1]; nodes stored in increasing order.
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 0.5 * w;
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = gauss_legendre(256);
  return rule;
}

}  // namespace qdisc
