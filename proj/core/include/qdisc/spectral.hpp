#pragma once

// Radial Fourier–Bessel representation on the unit disc.
//
// Inner product ⟨f, g⟩ = ∫₀¹ f ḡ r dr. The normalised radial modes are
//   φ̂_k(r) = √2 J₀(j_{0,k} r) / |J₁(j_{0,k})|,   −Δ_r φ̂_k = λ_k φ̂_k,  λ_k = j_{0,k}².
// A RadialState stores the coefficients c_k = ⟨ψ, φ̂_k⟩, k = 1..N, at index k − 1.

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdisc/bessel.hpp"
#include "qdisc/quadrature.hpp"

namespace qdisc {

using Complex = std::complex<double>;

class RadialState {
 public:
  RadialState() = default;
  explicit RadialState(int n) : coeffs_(static_cast<std::size_t>(n), Complex{}) {}
  explicit RadialState(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}

  int size() const { return static_cast<int>(coeffs_.size()); }
  /// Coefficient of mode k (1-based).
  Complex& operator()(int k) { return coeffs_.at(static_cast<std::size_t>(k - 1)); }
  Complex operator()(int k) const { return coeffs_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::vector<Complex>& coeffs() { return coeffs_; }

  double l2_norm() const;
  RadialState normalized() const;
  /// Zero-padded or truncated copy with n modes.
  RadialState resized(int n) const;

  Eigen::VectorXcd to_vector() const;
  static RadialState from_vector(const Eigen::VectorXcd& v);

  RadialState& operator+=(const RadialState& other);
  RadialState& operator-=(const RadialState& other);
  RadialState& operator*=(Complex scale);

 private:
  std::vector<Complex> coeffs_;
};

RadialState operator+(RadialState a, const RadialState& b);
RadialState operator-(RadialState a, const RadialState& b);
RadialState operator*(Complex s, RadialState a);

/// ⟨a, b⟩ in coefficient space (orthonormal basis); sizes may differ.
Complex inner(const RadialState& a, const RadialState& b);

/// Parameters (θ₂, θ₃) of the reference state; always inside
/// 𝒟 = {θ₂, θ₃ > 0, θ₂ + θ₃ < 1}.
class TargetParams {
 public:
  TargetParams(double theta2, double theta3);

  double theta2() const { return theta2_; }
  double theta3() const { return theta3_; }
  /// (√(1−θ₂−θ₃), √θ₂, √θ₃): weights of modes 1, 2, 3.
  std::array<double, 3> amplitudes() const;

 private:
  double theta2_;
  double theta3_;
};

/// ν = 0 zeros with the derived eigenvalues and normalisation constants.
class Basis {
 public:
  explicit Basis(std::shared_ptr<const bessel::ZeroTable> table);
  /// Convenience: computes a ν = 0 table with k_max modes.
  static Basis with_modes(int k_max, double tol = bessel::kDefaultZeroTol);

  int size() const { return static_cast<int>(zeros_.size()); }
  double zero(int k) const;
  double eigenvalue(int k) const;
  /// J₁(j_{0,k}); its sign is (−1)^{k+1}.
  double boundary_value(int k) const;
  const bessel::ZeroTable& table() const { return *table_; }

  /// φ̂_k(r).
  double mode(int k, double r) const;
  /// ψ(r) = Σ c_k φ̂_k(r).
  Complex evaluate(const RadialState& state, double r) const;

 private:
  void require_index(int k) const;

  std::shared_ptr<const bessel::ZeroTable> table_;
  std::vector<double> zeros_;
  std::vector<double> j1_at_zero_;
};

/// (Σ_k |j_{0,k}^s c_k|²)^{1/2}; s = 0 gives the L² norm.
double hs_norm(const RadialState& state, double s, const Basis& basis);

RadialState phi_sharp(const TargetParams& params, int n = 3);

/// ψ♯_τ = e^{−iτΔ} φ♯.
RadialState wave_packet(const TargetParams& params, double tau, const Basis& basis, int n = 3);

/// ⟨r² φ̂_l, φ̂_k⟩ for l ≠ k:
///   sign(J₁(j_l) J₁(j_k)) · 8 j_l j_k / (j_k² − j_l²)².
double coupling_closed_form(int l, int k, const Basis& basis);

/// ⟨r² φ̂_k, φ̂_k⟩ by quadrature.
double coupling_diagonal(int k, const Basis& basis, const QuadratureRule& rule = default_rule());

/// ⟨r² φ̂_l, φ̂_k⟩ by quadrature for any (l, k); the independent route.
double coupling_quadrature(int l, int k, const Basis& basis,
                           const QuadratureRule& rule = default_rule());

/// Symmetric n×n matrix M_{kj} = ⟨r² φ̂_j, φ̂_k⟩.
Eigen::MatrixXd coupling_matrix(int n, const Basis& basis,
                                const QuadratureRule& rule = default_rule());

std::string coupling_matrix_csv(const Eigen::MatrixXd& m);

}  // namespace qdisc
