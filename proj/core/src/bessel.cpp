#include "qdisc/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc::bessel {
namespace {

constexpr double kPi = std::numbers::pi;

// Ascending series; only used for x ≤ 2 where every term is bounded by 1.
double series(int nu, double x) {
  const double half = 0.5 * x;
  double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
  double sum = term;
  const double q = -half * half;
  for (int m = 1; m < 200; ++m) {
    term *= q / (m * static_cast<double>(m + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel expansion J_ν(x) ≈ √(2/πx) (P cos χ − Q sin χ), χ = x − (ν/2 + 1/4)π.
double hankel(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double previous = 2.0;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double magnitude = std::abs(term);
    if (magnitude > previous) break;  // asymptotic series started to diverge
    previous = magnitude;
    // a_k/x^k contributes to P (k even) or Q (k odd) with sign (−1)^{⌊k/2⌋}.
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (magnitude < 1e-17) break;
  }
  const double phase = (0.5 * nu + 0.25) * kPi;
  const double c = std::cos(x) * std::cos(phase) + std::sin(x) * std::sin(phase);
  const double s = std::sin(x) * std::cos(phase) - std::cos(x) * std::sin(phase);
  return std::sqrt(2.0 / (kPi * x)) * (p * c - q * s);
}

// Miller backward recurrence normalised with J_0 + 2 Σ J_{2k} = 1.
double miller(int nu, double x) {
  const double scale_point = std::max(static_cast<double>(nu), x);
  int start = static_cast<int>(scale_point + 20.0 + std::sqrt(160.0 * scale_point));
  start += start % 2;
  double upper = 0.0;   // J_{k+1}
  double current = 1e-30;  // J_k, seeded at k = start
  double sum = 0.0;
  double result = 0.0;
  for (int k = start; k > 0; --k) {
    const double lower = (2.0 * k / x) * current - upper;  // J_{k-1}
    upper = current;
    current = lower;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      upper *= 1e-250;
      sum *= 1e-250;
      result *= 1e-250;
    }
    const int order = k - 1;
    if (order == nu) result = current;
    if (order % 2 == 0) sum += (order == 0) ? current : 2.0 * current;
  }
  return result / sum;
}

double asymptotic_threshold(int nu) { return std::max(25.0, static_cast<double>(nu) * nu); }

// Evaluation without the public range checks; also serves order kMaxOrder + 1.
double evaluate(int nu, double x) {
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  if (x <= 2.0) return series(nu, x);
  if (x >= asymptotic_threshold(nu)) return hankel(nu, x);
  return miller(nu, x);
}

void require_domain(int nu, double x) {
  if (nu < 0 || nu > kMaxOrder) {
    throw DomainError("bessel: order " + std::to_string(nu) + " outside [0, 64]");
  }
  if (!(x >= 0.0) || x > kMaxArgument) {
    std::ostringstream os;
    os << "bessel: argument " << x << " outside [0, 1e6]";
    throw DomainError(os.str());
  }
}

}  // namespace

double bessel_j(int nu, double x) {
  require_domain(nu, x);
  return evaluate(nu, x);
}

double bessel_j_derivative(int nu, double x) {
  require_domain(nu, x);
  if (x == 0.0) throw DomainError("bessel_j_derivative: argument must be positive");
  return -evaluate(nu + 1, x) + (nu / x) * evaluate(nu, x);
}

double bessel_j_derivative_lower(int nu, double x) {
  require_domain(nu, x);
  if (x == 0.0) throw DomainError("bessel_j_derivative_lower: argument must be positive");
  if (nu == 0) return -evaluate(1, x);
  return evaluate(nu - 1, x) - (nu / x) * evaluate(nu, x);
}

ZeroTable::ZeroTable(int nu_max, int k_max, double tol, std::vector<std::vector<double>> zeros)
    : nu_max_(nu_max), k_max_(k_max), tol_(tol), zeros_(std::move(zeros)) {
  if (nu_max < 0 || k_max < 1 || static_cast<int>(zeros_.size()) != nu_max + 1) {
    throw DomainError("ZeroTable: inconsistent bounds");
  }
  for (const auto& row : zeros_) {
    if (static_cast<int>(row.size()) != k_max) throw DomainError("ZeroTable: ragged rows");
  }
}

double ZeroTable::zero(int nu, int k) const {
  if (nu < 0 || nu > nu_max_ || k < 1 || k > k_max_) {
    throw DomainError("ZeroTable: (nu=" + std::to_string(nu) + ", k=" + std::to_string(k) +
                      ") outside table bounds");
  }
  return zeros_[nu][k - 1];
}

const std::vector<double>& ZeroTable::zeros_of_order(int nu) const {
  if (nu < 0 || nu > nu_max_) throw DomainError("ZeroTable: order outside table");
  return zeros_[nu];
}

std::vector<std::string> ZeroTable::check_invariants() const {
  std::vector<std::string> issues;
  auto report = [&](int nu, int k, const std::string& what) {
    issues.push_back("(nu=" + std::to_string(nu) + ", k=" + std::to_string(k) + "): " + what);
  };
  for (int nu = 0; nu <= nu_max_; ++nu) {
    const auto& z = zeros_[nu];
    for (int k = 1; k <= k_max_; ++k) {
      const double j = z[k - 1];
      if (!(j > nu)) report(nu, k, "zero not above the order");
      if (k < k_max_ && !(z[k] > j)) report(nu, k, "zeros not increasing");
      if (j <= kMaxArgument && std::abs(evaluate(nu, j)) > 10.0 * tol_) {
        report(nu, k, "|J(j)| exceeds 10*tol");
      }
    }
    if (nu == 0) {
      for (int k = 1; k + 1 < k_max_; ++k) {
        const double gap = z[k] - z[k - 1];
        const double next_gap = z[k + 1] - z[k];
        if (!(next_gap > gap)) report(0, k, "zero spacing not strictly increasing");
        if (!(std::abs(next_gap - kPi) < std::abs(gap - kPi))) {
          report(0, k, "zero spacing not converging to pi");
        }
      }
    }
  }
  return issues;
}

ZeroTable compute_zeros(int nu_max, int k_max, double tol) {
  if (nu_max < 0 || nu_max > kMaxOrder) throw DomainError("compute_zeros: nu_max outside [0, 64]");
  if (k_max < 1) throw DomainError("compute_zeros: k_max must be at least 1");
  if (!(tol > 0.0) || tol > 1e-6) throw DomainError("compute_zeros: tol must lie in (0, 1e-6]");

  constexpr double kStep = kPi / 8.0;  // below half the minimal zero spacing
  std::vector<std::vector<double>> zeros(nu_max + 1, std::vector<double>(k_max));
  for (int nu = 0; nu <= nu_max; ++nu) {
    // J_ν > 0 on (0, j_{ν,1}) and ν < j_{ν,1}.
    double floor = static_cast<double>(nu);
    for (int k = 1; k <= k_max; ++k) {
      const double sign_before = (k % 2 == 1) ? 1.0 : -1.0;
      auto f = [&](double x) { return sign_before * evaluate(nu, x); };

      const double guess = (k + 0.5 * nu - 0.25) * kPi;
      // A start point within 3 of the previous zero cannot lie past j_{ν,k+1};
      // a positive f there therefore places it before j_{ν,k}.
      double a = std::clamp(guess - kPi / 4.0, floor, floor + 3.0);
      if (!(f(a) > 0.0)) a = floor;
      double b = a + kStep;
      int expansions = 0;
      while (f(b) > 0.0) {
        a = b;
        b += kStep;
        if (++expansions > 10000 || b > kMaxArgument) {
          throw NumericalError("compute_zeros: no sign change bracketing j_{" + std::to_string(nu) +
                               "," + std::to_string(k) + "}");
        }
      }
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (f(mid) > 0.0) {
          a = mid;
        } else {
          b = mid;
        }
      }
      double root = 0.5 * (a + b);
      for (int it = 0; it < 2; ++it) {
        const double slope = -evaluate(nu + 1, root) + (nu / root) * evaluate(nu, root);
        const double next = root - evaluate(nu, root) / slope;
        if (next < a - tol || next > b + tol) break;
        root = next;
      }
      zeros[nu][k - 1] = root;
      floor = root + 0.5;
    }
  }
  ZeroTable table(nu_max, k_max, tol, std::move(zeros));
  if (auto issues = table.check_invariants(); !issues.empty()) {
    throw NumericalError("compute_zeros: invariant violated " + issues.front());
  }
  return table;
}

}  // namespace qdisc::bessel
