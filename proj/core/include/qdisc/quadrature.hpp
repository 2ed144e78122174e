#pragma once

#include <complex>
#include <type_traits>
#include <vector>

namespace qdisc {

/// Gauss–Legendre rule on [0, 1]. Integrates ∫₀¹ p(r) dr exactly for
/// polynomials of degree ≤ 2·order − 1, hence ∫₀¹ p(r) r dr exactly for
/// deg p ≤ 2·order − 2.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  /// Largest p such that ∫₀¹ r^p · r dr is reproduced exactly.
  int exact_weighted_degree() const { return 2 * order - 2; }
};

QuadratureRule gauss_legendre(int order);

/// 256 nodes: resolves J₀(j_{0,k} r) products up to k ≈ 64 to 1e-12.
const QuadratureRule& default_rule();

/// ∫₀¹ f(r) r dr; the weight r of the radial inner product is applied here.
template <class F>
std::complex<double> weighted_integral(F&& f, const QuadratureRule& rule) {
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    sum += rule.weights[i] * r * std::complex<double>(f(r));
  }
  return sum;
}

}  // namespace qdisc
