#pragma once

// Frequency sets λ_n − λ_p, non-resonance and density checks, Gram matrices of
// exponential families, and the minimum-norm trigonometric moment solver.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdisc/bessel.hpp"
#include "qdisc/control_signal.hpp"
#include "qdisc/spectral.hpp"

namespace qdisc {

/// ω = λ_n − λ_p; the zero frequency carries n = p = 0.
struct Frequency {
  double omega = 0.0;
  int n = 0;
  int p = 0;
};

class FrequencySet {
 public:
  /// Just the zero frequency.
  FrequencySet() : FrequencySet({{0.0, 0, 0}}, 0.0) {}
  /// `entries` must be strictly increasing and start at 0.
  FrequencySet(std::vector<Frequency> entries, double packet_gap);

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<Frequency>& entries() const { return entries_; }
  const Frequency& operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  std::vector<double> omegas() const;
  /// Largest mode index n appearing in a tag.
  int mode_bound() const;
  std::optional<int> index_of(int n, int p) const;
  /// min(λ_3 − λ_2, λ_2 − λ_1).
  double packet_gap() const { return packet_gap_; }

 private:
  std::vector<Frequency> entries_;
  double packet_gap_;
};

/// {0} ∪ {λ_n − λ_p : p = 1,2,3, p < n ≤ n_max}, sorted. Throws NumericalError
/// when two frequencies lie closer than 10·tol of the table.
FrequencySet build_frequencies(const bessel::ZeroTable& table, int n_max);

struct NonresonanceReport {
  double min_gap = 0.0;
  Frequency min_gap_left, min_gap_right;
  /// Smallest gap between frequencies sharing the mode n.
  double within_packet_min_gap = 0.0;
  double packet_gap = 0.0;
  std::vector<std::pair<Frequency, Frequency>> collisions;
  bool ok() const { return collisions.empty() && within_packet_min_gap >= packet_gap * (1 - 1e-9); }
};

/// Exhaustive pairwise scan of the (unsorted) differences λ_n − λ_p, n ≤ n_max.
/// Pairs closer than 10·tol are reported as collisions.
NonresonanceReport check_nonresonance(const bessel::ZeroTable& table, int n_max);

/// ω_{−K+1}, …, ω_{−1}, 0, ω_1, …, ω_{K−1} with ω_{−n} = −ω_n.
std::vector<double> symmetric_omegas(const FrequencySet& freqs);

struct DensityEstimate {
  double r = 0.0;
  int max_count = 0;
  double estimate = 0.0;  // max_count / r
  double bound = 0.0;     // 3√(r + λ_3)/r
};

/// Largest number of symmetric frequencies in a closed window of length r,
/// divided by r.
std::vector<DensityEstimate> upper_density(const FrequencySet& freqs,
                                           const std::vector<double>& r_values,
                                           double lambda3);

/// ∫₀ᵀ e^{ias} ds and ∫₀ᵀ s e^{ias} ds, accurate for small |a|T.
Complex exp_integral(double a, double horizon);
Complex t_exp_integral(double a, double horizon);

/// G_{jk} = ∫₀ᵀ e_j ē_k over e_j = e^{iω_j t}, followed by e(t) = t when
/// `with_linear`.
Eigen::MatrixXcd gram_matrix(const std::vector<double>& omegas, double horizon,
                             bool with_linear = true);
Eigen::MatrixXcd gram_matrix(const FrequencySet& freqs, double horizon, bool with_linear = true);

struct GramDiagnostics {
  int size = 0;
  double min_eigenvalue = 0.0;  // Ingham lower constant m
  double max_eigenvalue = 0.0;  // Ingham upper constant M
  double condition = 0.0;
};
GramDiagnostics gram_diagnostics(const Eigen::MatrixXcd& gram);

struct MomentProblem {
  FrequencySet freqs;
  /// d_k aligned with freqs; d_0 must be real.
  std::vector<Complex> d;
  /// Value of ∫₀ᵀ t w(t) dt.
  double d_tilde = 0.0;
  double horizon = 1.0;

  void validate() const;
};

/// w(t) = Σ_j x_j e^{−iω_j t} + x_t·t on [0, T].
class ExponentialSum {
 public:
  ExponentialSum() = default;
  ExponentialSum(std::vector<double> omegas, std::vector<Complex> coeffs, Complex linear,
                 double horizon);

  double horizon() const { return horizon_; }
  const std::vector<double>& omegas() const { return omegas_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex linear() const { return linear_; }

  Complex complex_value(double t) const;
  double value(double t) const { return complex_value(t).real(); }
  /// ∫₀ᵗ w.
  Complex antiderivative(double t) const;

  /// Values on t_i = iT/M; `max_imag` receives max |ℑ w(t_i)|.
  std::vector<double> sample(int intervals, double* max_imag = nullptr) const;
  std::vector<double> sample_antiderivative(int intervals, double* max_imag = nullptr) const;

 private:
  // Σ_j a_j e^{−iω_j t_i} over the grid, by recurrence with periodic re-anchoring.
  std::vector<Complex> sample_sum(const std::vector<Complex>& a, int intervals) const;

  std::vector<double> omegas_;
  std::vector<Complex> coeffs_;
  Complex linear_{};
  double horizon_ = 1.0;
};

struct MomentOptions {
  int intervals = 1 << 18;
  double max_condition = 1e12;
};

struct MomentSolution {
  ExponentialSum w;
  ControlSignal samples = ControlSignal::zero(1.0, 1);
  /// max_k |(Gx − d)_k| over the symmetric system.
  double max_residual = 0.0;
  double max_imag = 0.0;
  GramDiagnostics gram;
  bool jittered = false;
  std::vector<std::string> warnings;
};

/// Minimum-L² real w with ∫ w e^{iω_k t} = d_k (k over the symmetric set,
/// d_{−k} = d̄_k) and ∫ t w = d̃. Throws ConditioningError when cond(G) exceeds
/// options.max_condition.
MomentSolution solve_moment(const MomentProblem& problem, const MomentOptions& options = {});

/// Moment data steering the linearised system from 0 to psi_f at time T:
/// slots (2,1), (3,1), (3,2) from the low-frequency relations with C real,
/// (n,p), n ≥ 4, from i α_p f_n e^{iλ_n T}/M_{np}; d_0 = d̃ = 0.
/// Requires |ℜ⟨psi_f, ψ♯_T⟩| ≤ 1e-8 and psi_f supported on n ≤ freqs.mode_bound().
MomentProblem build_rhs(const RadialState& psi_f, const TargetParams& params, double horizon,
                        const FrequencySet& freqs, const Basis& basis);

/// The constant C of the (3,2) slot for the given target.
double low_frequency_constant(const RadialState& psi_f, const TargetParams& params,
                              double horizon, const Basis& basis);

/// max(1, 2π/γ̃).
double default_horizon(const FrequencySet& freqs);

}  // namespace qdisc
