#pragma once

// Bessel functions of the first kind J_ν for integer order and real argument,
// and certified tables of their positive zeros j_{ν,k}.

#include <string>
#include <vector>

namespace qdisc::bessel {

inline constexpr int kMaxOrder = 64;
inline constexpr double kMaxArgument = 1e6;
inline constexpr double kDefaultZeroTol = 1e-12;

/// J_ν(x) for 0 ≤ ν ≤ 64 and 0 ≤ x ≤ 10⁶, absolute error below 1e-12.
/// Throws DomainError outside that range.
double bessel_j(int nu, double x);

/// J_ν'(x) through J_ν' = −J_{ν+1} + (ν/x) J_ν.
double bessel_j_derivative(int nu, double x);

/// J_ν'(x) through J_ν' = J_{ν−1} − (ν/x) J_ν (J_{−1} = −J_1 for ν = 0).
/// Independent of bessel_j_derivative; used to cross-check the two recurrences.
double bessel_j_derivative_lower(int nu, double x);

/// Positive zeros j_{ν,k} for ν = 0..nu_max, k = 1..k_max.
///
/// Immutable after construction. Entries are accurate to `tol()` in absolute
/// terms and were polished so that |J_ν(j_{ν,k})| is at rounding level.
class ZeroTable {
 public:
  ZeroTable(int nu_max, int k_max, double tol, std::vector<std::vector<double>> zeros);

  int nu_max() const { return nu_max_; }
  int k_max() const { return k_max_; }
  double tol() const { return tol_; }

  /// j_{ν,k}; k is 1-based. Throws DomainError when out of range.
  double zero(int nu, int k) const;
  const std::vector<double>& zeros_of_order(int nu) const;

  /// Human-readable list of violated invariants (empty when the table is sound).
  std::vector<std::string> check_invariants() const;

 private:
  int nu_max_;
  int k_max_;
  double tol_;
  std::vector<std::vector<double>> zeros_;
};

/// Computes a table by McMahon initial guesses, a sign-change bracket and
/// bisection to `tol` followed by Newton polishing.
ZeroTable compute_zeros(int nu_max, int k_max, double tol = kDefaultZeroTol);

}  // namespace qdisc::bessel
