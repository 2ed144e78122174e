#include "qdisc/dynamics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc {
namespace {

constexpr Complex kI{0.0, 1.0};

double squared_norm(const Eigen::VectorXcd& c) { return c.squaredNorm(); }

}  // namespace

GalerkinSystem::GalerkinSystem(Eigen::VectorXd lambdas, Eigen::MatrixXd coupling)
    : lambdas_(std::move(lambdas)), coupling_(std::move(coupling)) {
  const auto n = lambdas_.size();
  if (n < 1 || coupling_.rows() != n || coupling_.cols() != n) {
    throw DomainError("GalerkinSystem: coupling must be N×N with N = len(lambdas)");
  }
  const double asym = (coupling_ - coupling_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) throw DomainError("GalerkinSystem: coupling matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(coupling_);
  if (eig.info() != Eigen::Success) throw NumericalError("GalerkinSystem: eigensolver failed");
  vectors_ = eig.eigenvectors();
  values_ = eig.eigenvalues();
}

GalerkinSystem GalerkinSystem::from_basis(const Basis& basis, int n, const QuadratureRule& rule) {
  Eigen::VectorXd lambdas(n);
  for (int k = 1; k <= n; ++k) lambdas(k - 1) = basis.eigenvalue(k);
  return GalerkinSystem(std::move(lambdas), coupling_matrix(n, basis, rule));
}

RadialState free_evolution(const RadialState& state, double t, const Basis& basis) {
  RadialState out(state);
  for (int k = 1; k <= out.size(); ++k) out(k) *= std::polar(1.0, -basis.eigenvalue(k) * t);
  return out;
}

RadialState free_evolution(const RadialState& state, double t, const GalerkinSystem& sys) {
  if (state.size() > sys.size()) throw DomainError("free_evolution: state larger than system");
  RadialState out(state);
  for (int k = 1; k <= out.size(); ++k) out(k) *= std::polar(1.0, -sys.lambdas()(k - 1) * t);
  return out;
}

int recommended_steps(const ControlSignal& w, const GalerkinSystem& sys) {
  return static_cast<int>(std::ceil(2.0 * w.horizon() * w.max_abs() * sys.coupling_norm()));
}

Trajectory simulate_bilinear(const RadialState& state0, const ControlSignal& w,
                             const GalerkinSystem& sys, int steps,
                             const SimulationOptions& options) {
  if (steps < 1) throw DomainError("simulate_bilinear: steps must be positive");
  const int n = sys.size();
  if (state0.size() > n) throw DomainError("simulate_bilinear: state larger than system");

  const double horizon = w.horizon();
  const double h = horizon / steps;
  Trajectory out;
  if (steps < recommended_steps(w, sys)) {
    out.warnings.push_back("step count below resolution heuristic 2*T*max|w|*||M|| = " +
                           std::to_string(recommended_steps(w, sys)));
  }

  Eigen::VectorXcd half(n);
  for (int k = 0; k < n; ++k) half(k) = std::polar(1.0, -0.5 * h * sys.lambdas()(k));
  const Eigen::MatrixXd& q = sys.coupling_vectors();
  const Eigen::VectorXd& d = sys.coupling_values();

  Eigen::VectorXcd c = state0.resized(n).to_vector();
  const double norm0 = squared_norm(c);
  out.times.push_back(0.0);
  out.states.push_back(RadialState::from_vector(c));

  Eigen::VectorXcd y(n);
  for (int step = 0; step < steps; ++step) {
    const double t_mid = (step + 0.5) * h;
    const double coefficient = w.value(t_mid);
    c = half.cwiseProduct(c);
    y.noalias() = q.transpose() * c;
    Eigen::VectorXcd g;
    if (options.forcing) g = q.transpose() * options.forcing(t_mid);
    for (int j = 0; j < n; ++j) {
      const Complex a = 0.5 * h * coefficient * d(j) * kI;
      const Complex denom = 1.0 + a;
      y(j) = (1.0 - a) / denom * y(j);
      if (options.forcing) y(j) -= kI * h * g(j) / denom;
    }
    c.noalias() = q * y;
    c = half.cwiseProduct(c);

    if (!options.forcing) {
      out.max_norm_drift = std::max(out.max_norm_drift, std::abs(squared_norm(c) - norm0));
    }
    const bool last = step + 1 == steps;
    if (last || (options.record_every > 0 && (step + 1) % options.record_every == 0)) {
      out.times.push_back((step + 1) * h);
      out.states.push_back(RadialState::from_vector(c));
    }
  }
  return out;
}

Complex oscillatory_integral(const std::vector<double>& f, double horizon, double omega) {
  const int m = static_cast<int>(f.size()) - 1;
  if (m < 1) throw DomainError("oscillatory_integral: need at least two samples");
  const double h = horizon / m;
  if (m == 1) {
    return 0.5 * h * (f[0] + f[1] * std::polar(1.0, omega * h));
  }
  // Simpson weights over [0, simpson_end], 3/8 rule on a trailing odd block.
  const int simpson_end = (m % 2 == 0) ? m : m - 3;
  const Complex rotate = std::polar(1.0, omega * h);
  Complex phase{1.0, 0.0};
  Complex sum{};
  for (int i = 0; i <= simpson_end; ++i) {
    if (i % 512 == 0) phase = std::polar(1.0, omega * h * i);
    double weight = (i == 0 || i == simpson_end) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * f[i] * phase;
    phase *= rotate;
  }
  sum *= h / 3.0;
  if (simpson_end < m) {
    Complex tail{};
    constexpr double w38[4] = {1.0, 3.0, 3.0, 1.0};
    for (int i = 0; i < 4; ++i) {
      const int idx = simpson_end + i;
      tail += w38[i] * f[idx] * std::polar(1.0, omega * h * idx);
    }
    sum += 3.0 * h / 8.0 * tail;
  }
  return sum;
}

RadialState simulate_linearized(const ControlSignal& v, const TargetParams& params,
                                const GalerkinSystem& sys, double horizon,
                                const RadialState& initial) {
  if (std::abs(horizon - v.horizon()) > 1e-12 * horizon) {
    throw DomainError("simulate_linearized: control horizon differs from T");
  }
  if (sys.size() < 3) throw DomainError("simulate_linearized: need at least 3 modes");
  v.require_admissible();
  const auto vdot = v.derivative_samples();
  const auto amp = params.amplitudes();
  const int n = sys.size();
  RadialState out(n);
  for (int k = 1; k <= n; ++k) {
    const double lk = sys.lambdas()(k - 1);
    Complex sum{};
    for (int p = 1; p <= 3; ++p) {
      if (p == k) {
        // Resonant term: ∫ v̇ = v(T) − v(0).
        sum += amp[p - 1] * sys.coupling()(k - 1, p - 1) * oscillatory_integral(vdot, horizon, 0.0);
        continue;
      }
      const double omega = lk - sys.lambdas()(p - 1);
      sum += amp[p - 1] * sys.coupling()(k - 1, p - 1) * oscillatory_integral(vdot, horizon, omega);
    }
    out(k) = -kI * std::polar(1.0, -lk * horizon) * sum;
  }
  if (initial.size() > 0) out += free_evolution(initial, horizon, sys);
  return out;
}

RadialState simulate_linearized_galerkin(const ControlSignal& v, const TargetParams& params,
                                         const GalerkinSystem& sys, int steps,
                                         const RadialState& initial) {
  const int n = sys.size();
  if (n < 3) throw DomainError("simulate_linearized_galerkin: need at least 3 modes");
  const auto amp = params.amplitudes();
  const Eigen::MatrixXd m13 = sys.coupling().leftCols(3);
  SimulationOptions options;
  options.forcing = [&](double t) {
    Eigen::Vector3cd packet;
    for (int p = 0; p < 3; ++p) packet(p) = amp[p] * std::polar(1.0, -sys.lambdas()(p) * t);
    return Eigen::VectorXcd(v.derivative(t) * (m13 * packet));
  };
  const ControlSignal no_coupling = ControlSignal::zero(v.horizon(), 1);
  const RadialState start = initial.size() > 0 ? initial : RadialState(n);
  return simulate_bilinear(start, no_coupling, sys, steps, options).final_state();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,k,re,im\n";
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const auto& s = trajectory.states[i];
    for (int k = 1; k <= s.size(); ++k) {
      os << trajectory.times[i] << ',' << k << ',' << s(k).real() << ',' << s(k).imag() << '\n';
    }
  }
  return os.str();
}

}  // namespace qdisc
