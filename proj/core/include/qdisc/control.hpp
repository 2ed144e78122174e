#pragma once

// Linearised control synthesis, the nonlinear endpoint map with a local
// steering loop, and reconstruction of the physical radius R(τ).

#include <random>
#include <string>
#include <vector>

#include "qdisc/control_signal.hpp"
#include "qdisc/dynamics.hpp"
#include "qdisc/moment.hpp"
#include "qdisc/spectral.hpp"

namespace qdisc {

struct SteeringProblem {
  TargetParams params{0.25, 0.25};
  double horizon = 1.0;
  RadialState psi0;
  RadialState psif;
};

struct SynthesisOptions {
  /// Mode cutoff of the frequency set (K).
  int n_max = 20;
  /// Sample intervals of the returned control.
  int intervals = 1 << 18;
  double max_condition = 1e12;
};

struct Synthesis {
  /// v with v̇ = w carried exactly.
  ControlSignal v = ControlSignal::zero(1.0, 1);
  MomentProblem problem;
  MomentSolution solution;
  /// Ψ̃_f = Ψ_f − e^{−iTΔ}Ψ₀, the zero-initial-data target.
  RadialState target;
};

/// The linear map (Ψ₀, Ψ_f) ↦ v. Requires |ℜ⟨Ψ₀, φ♯⟩| ≤ 1e-8 and a target
/// tangent to ψ♯_T supported on modes ≤ n_max.
Synthesis synthesize_linearized(const SteeringProblem& problem, const Basis& basis,
                                const SynthesisOptions& options = {});

/// v(t) = ∫₀ᵗ w by cumulative trapezoid (exact for the piecewise-linear w),
/// carrying w as derivative. Requires |∫w| and |∫t w| ≤ 1e-8·T·max|w|·max(1,T).
/// Both overloads subtract an O(h²) multiple of sin(πt/T) so that the
/// trapezoid sum of the returned samples vanishes.
ControlSignal integrate_control(const ControlSignal& w);
/// Exact antiderivative of an exponential sum sampled on `intervals`.
ControlSignal integrate_control(const ExponentialSum& w, int intervals);

/// Coefficient u̇ − 4u² of the fixed-domain bilinear system.
ControlSignal bilinear_coefficient(const ControlSignal& u);

/// ψ(T) of i∂ₜψ = −Δψ + (u̇ − 4u²) r² ψ from psi0.
RadialState endpoint_map(const ControlSignal& u, const RadialState& psi0,
                         const GalerkinSystem& sys, int steps = 1 << 14);

enum class SteeringStatus { converged, max_iterations, diverged };
std::string to_string(SteeringStatus status);

struct SteeringOptions {
  int iterations = 5;
  double tolerance = 1e-8;
  int steps = 1 << 14;
  SynthesisOptions synthesis;
};

struct SteeringReport {
  ControlSignal u = ControlSignal::zero(1.0, 1);
  /// ‖psif − Θ_T(u_m, psi0)‖ for m = 0, 1, ...
  std::vector<double> residuals;
  int iterations = 0;
  SteeringStatus status = SteeringStatus::max_iterations;
};

/// u_{m+1} = u_m + 𝓛(0, P r_m) with r_m = psif − Θ_T(u_m, psi0), 𝓛 frozen at
/// (0, φ♯) and P removing the ℜ⟨·, ψ♯_T⟩ ψ♯_T component and modes above
/// n_max. Stops when the residual is below tolerance, after `iterations`
/// updates, or when the residual grows three times in a row.
SteeringReport steer_local(const SteeringProblem& problem, const Basis& basis,
                           const GalerkinSystem& sys, const SteeringOptions& options = {});

struct RadiusTrajectory {
  std::vector<double> taus;
  /// g(τ): fixed-domain time reached at τ.
  std::vector<double> times;
  std::vector<double> radii;
  double t_star = 0.0;
};

/// Solves g' = 4 exp(−2 ∫₀^g u) with RK4 (step T/4096) until g = T, locating
/// the crossing by bisection on the last step; R(τ) = exp(∫₀^{g(τ)} u).
RadiusTrajectory radius_from_control(const ControlSignal& u, double horizon);

struct DiscProfile {
  double radius = 1.0;
  std::vector<double> rho;
  std::vector<Complex> values;
};

/// Undoes the phase change ψ = ξ e^{−iur² + 4i∫u} and the scaling r = ρ/R:
/// φ(ρ) = ξ(ρ/R)/R on `samples` + 1 points of [0, R].
DiscProfile map_fixed_to_disc(const RadialState& psi, const Basis& basis, double u_value,
                              double phase_integral, double radius = 1.0, int samples = 256);

/// Random direction on modes 1..modes with |c_k| ∝ j_{0,k}^{−3.5}, projected
/// onto T_reference 𝕊 and scaled to H³ norm `h3_norm`.
RadialState random_tangent_target(const Basis& basis, const RadialState& reference, int modes,
                                  double h3_norm, std::mt19937_64& rng);

/// (base + δ·e)/‖base + δ·e‖ for a random unit direction e with the same decay.
RadialState perturbed_unit_state(const Basis& basis, const RadialState& base, int modes,
                                 double delta, std::mt19937_64& rng);

std::string radius_csv(const RadiusTrajectory& trajectory);
/// Columns t,v,w.
std::string control_csv(const ControlSignal& v);

}  // namespace qdisc
