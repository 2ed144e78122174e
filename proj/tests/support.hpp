#pragma once

#include <memory>
#include <random>

#include "qdisc/bessel.hpp"
#include "qdisc/spectral.hpp"

namespace test_support {

/// ν = 0 basis with 500 modes, computed once per process.
inline const qdisc::Basis& basis() {
  static const qdisc::Basis b = qdisc::Basis::with_modes(500);
  return b;
}

/// ν ≤ 3, k ≤ 64 table, computed once per process.
inline const qdisc::bessel::ZeroTable& table64() {
  static const auto t = qdisc::bessel::compute_zeros(3, 64);
  return t;
}

inline qdisc::RadialState random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  qdisc::RadialState s(n);
  for (int k = 1; k <= n; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    s(k) = {re, im};
  }
  return s;
}

}  // namespace test_support
