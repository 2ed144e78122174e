#pragma once

// Galerkin simulation of the fixed-domain radial Schrödinger systems
//
//   i ċ = diag(λ) c + w(t) M c + f(t),   M_{kj} = ⟨r² φ̂_j, φ̂_k⟩,
//
// which covers free evolution (w = 0, f = 0), the bilinear system with
// coefficient w = u̇ − 4u², and the linearised system (w = 0, f = v̇ M ψ♯_t).

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdisc/control_signal.hpp"
#include "qdisc/quadrature.hpp"
#include "qdisc/spectral.hpp"

namespace qdisc {

class GalerkinSystem {
 public:
  GalerkinSystem(Eigen::VectorXd lambdas, Eigen::MatrixXd coupling);
  /// First n radial modes of `basis`; off-diagonal couplings in closed form,
  /// diagonal by quadrature.
  static GalerkinSystem from_basis(const Basis& basis, int n,
                                   const QuadratureRule& rule = default_rule());

  int size() const { return static_cast<int>(lambdas_.size()); }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  const Eigen::MatrixXd& coupling() const { return coupling_; }
  /// M = Q diag(d) Qᵀ.
  const Eigen::MatrixXd& coupling_vectors() const { return vectors_; }
  const Eigen::VectorXd& coupling_values() const { return values_; }
  double coupling_norm() const { return values_.cwiseAbs().maxCoeff(); }

 private:
  Eigen::VectorXd lambdas_;
  Eigen::MatrixXd coupling_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd values_;
};

/// c_k ↦ e^{−iλ_k t} c_k using the basis eigenvalues.
RadialState free_evolution(const RadialState& state, double t, const Basis& basis);
RadialState free_evolution(const RadialState& state, double t, const GalerkinSystem& sys);

struct SimulationOptions {
  /// Record every n-th step; 0 keeps only the initial and final states.
  int record_every = 0;
  /// Mode-coefficient forcing f(t) (size N); empty means none.
  std::function<Eigen::VectorXcd(double)> forcing;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<RadialState> states;
  /// max over steps of |‖c(t)‖² − ‖c(0)‖²|.
  double max_norm_drift = 0.0;
  std::vector<std::string> warnings;

  const RadialState& final_state() const { return states.back(); }
};

/// Advances i ċ = diag(λ)c + w(t) M c + f(t) over [0, w.horizon()] in `steps`
/// steps. Each step is a Strang splitting: exact half-steps of the diagonal
/// part around a Crank–Nicolson (Cayley) step of the coupling part, evaluated
/// at the step midpoint. Every factor is unitary, so the scheme conserves the
/// norm when f = 0, and it reproduces free evolution exactly when w = 0.
Trajectory simulate_bilinear(const RadialState& state0, const ControlSignal& w,
                             const GalerkinSystem& sys, int steps,
                             const SimulationOptions& options = {});

/// Smallest step count satisfying the coupling resolution heuristic
/// steps ≥ 2 T max|w| ‖M‖.
int recommended_steps(const ControlSignal& w, const GalerkinSystem& sys);

/// Ψ(T) of the linearised system around ψ♯ from the explicit expansion
///   Ψ_k(T) = −i e^{−iλ_k T} Σ_p α_p M_{kp} ∫₀ᵀ v̇(s) e^{i(λ_k − λ_p)s} ds
/// (plus e^{−iTΔ}Ψ₀ when `initial` is non-empty). Time integrals use
/// composite Simpson on the sample grid of v̇.
RadialState simulate_linearized(const ControlSignal& v, const TargetParams& params,
                                const GalerkinSystem& sys, double horizon,
                                const RadialState& initial = {});

/// Same quantity through simulate_bilinear with forcing v̇(t) M ψ♯_t; the
/// independent route used to cross-check simulate_linearized.
RadialState simulate_linearized_galerkin(const ControlSignal& v, const TargetParams& params,
                                         const GalerkinSystem& sys, int steps,
                                         const RadialState& initial = {});

/// ∫₀ᵀ f(s) e^{iωs} ds for samples f on a uniform grid (composite Simpson,
/// closing with the 3/8 rule when the interval count is odd).
Complex oscillatory_integral(const std::vector<double>& f, double horizon, double omega);

/// CSV with columns t,k,re,im.
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace qdisc
