#include "qdisc/control.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc {
namespace {

constexpr Complex kI{0.0, 1.0};

// ∫₀ᵀ t w(t) dt, exact for the piecewise-linear interpolant.
double first_moment(const ControlSignal& w) {
  const auto& s = w.samples();
  const double h = w.step();
  double sum = 0.0;
  for (int i = 0; i < w.intervals(); ++i) {
    const double a = w.time(i), b = w.time(i + 1);
    sum += h / 6.0 * (2.0 * a * s[i] + a * s[i + 1] + b * s[i] + 2.0 * b * s[i + 1]);
  }
  return sum;
}

// The sampled antiderivative of a zero-mean w has a trapezoid sum of order h²
// rather than zero. Subtracting c·sin(πt/T) (and its derivative) removes it
// while keeping both end values at zero.
void remove_trapezoid_defect(std::vector<double>& v, std::vector<double>& dv, double horizon) {
  const int m = static_cast<int>(v.size()) - 1;
  double sum_v = 0.0, sum_b = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double weight = (i == 0 || i == m) ? 0.5 : 1.0;
    sum_v += weight * v[i];
    sum_b += weight * std::sin(std::numbers::pi * i / m);
  }
  if (sum_b == 0.0) return;
  const double c = sum_v / sum_b;
  for (int i = 0; i <= m; ++i) {
    v[i] -= c * std::sin(std::numbers::pi * i / m);
    dv[i] -= c * std::numbers::pi / horizon * std::cos(std::numbers::pi * i / m);
  }
  v.front() = 0.0;
  v.back() = 0.0;
}

}  // namespace

Synthesis synthesize_linearized(const SteeringProblem& problem, const Basis& basis,
                                const SynthesisOptions& options) {
  if (options.n_max > basis.size()) {
    throw DomainError("synthesize_linearized: n_max exceeds the basis size");
  }
  const auto& params = problem.params;
  const double tangent = inner(problem.psi0, phi_sharp(params)).real();
  if (std::abs(tangent) > 1e-8) {
    std::ostringstream os;
    os << "synthesize_linearized: initial state not tangent to the reference (Re<psi0, phi> = "
       << tangent << ")";
    throw ConstraintError(os.str());
  }

  Synthesis out;
  out.target = problem.psif - free_evolution(problem.psi0, problem.horizon, basis);
  const auto freqs = build_frequencies(basis.table(), options.n_max);
  out.problem = build_rhs(out.target, params, problem.horizon, freqs, basis);
  out.solution = solve_moment(out.problem, {options.intervals, options.max_condition});
  out.v = integrate_control(out.solution.w, options.intervals);
  out.v.require_admissible();
  return out;
}

ControlSignal integrate_control(const ControlSignal& w) {
  const double horizon = w.horizon();
  const double scale = 1e-8 * horizon * std::max(w.max_abs(), 1e-300) * std::max(1.0, horizon);
  const double mean = w.trapezoid();
  const double moment = first_moment(w);
  if (std::abs(mean) > scale || std::abs(moment) > scale) {
    std::ostringstream os;
    os << "integrate_control: w violates the vanishing moments (int w = " << mean
       << ", int t w = " << moment << ")";
    throw ConstraintError(os.str());
  }
  std::vector<double> dv = w.samples();
  const double h = w.step();
  std::vector<double> v(dv.size(), 0.0);
  for (std::size_t i = 1; i < dv.size(); ++i) v[i] = v[i - 1] + 0.5 * h * (dv[i - 1] + dv[i]);
  remove_trapezoid_defect(v, dv, horizon);
  return ControlSignal(horizon, std::move(v), std::move(dv));
}

ControlSignal integrate_control(const ExponentialSum& w, int intervals) {
  auto v = w.sample_antiderivative(intervals);
  auto dv = w.sample(intervals);
  remove_trapezoid_defect(v, dv, w.horizon());
  return ControlSignal(w.horizon(), std::move(v), std::move(dv));
}

ControlSignal bilinear_coefficient(const ControlSignal& u) {
  auto c = u.derivative_samples();
  const auto& s = u.samples();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= 4.0 * s[i] * s[i];
  return ControlSignal(u.horizon(), std::move(c));
}

RadialState endpoint_map(const ControlSignal& u, const RadialState& psi0,
                         const GalerkinSystem& sys, int steps) {
  return simulate_bilinear(psi0, bilinear_coefficient(u), sys, steps).final_state();
}

std::string to_string(SteeringStatus status) {
  switch (status) {
    case SteeringStatus::converged: return "converged";
    case SteeringStatus::max_iterations: return "max_iterations";
    case SteeringStatus::diverged: return "diverged";
  }
  return "unknown";
}

SteeringReport steer_local(const SteeringProblem& problem, const Basis& basis,
                           const GalerkinSystem& sys, const SteeringOptions& options) {
  const int n = sys.size();
  if (std::abs(problem.psi0.l2_norm() - 1.0) > 1e-10) {
    throw ConstraintError("steer_local: initial state must have unit norm");
  }
  if (problem.psif.size() > n || problem.psi0.size() > n) {
    throw DomainError("steer_local: states larger than the Galerkin system");
  }
  const int intervals = options.synthesis.intervals;
  const RadialState reference = wave_packet(problem.params, problem.horizon, basis, n);
  const RadialState target = problem.psif.resized(n);

  SteeringReport report;
  report.u = ControlSignal::zero(problem.horizon, intervals);
  int growth = 0;
  while (true) {
    const RadialState reached = endpoint_map(report.u, problem.psi0, sys, options.steps);
    RadialState residual = target - reached;
    const double norm = residual.l2_norm();
    if (!report.residuals.empty() && norm > report.residuals.back()) {
      ++growth;
    } else {
      growth = 0;
    }
    report.residuals.push_back(norm);
    if (norm <= options.tolerance) {
      report.status = SteeringStatus::converged;
      break;
    }
    if (growth >= 3) {
      report.status = SteeringStatus::diverged;
      break;
    }
    if (report.iterations >= options.iterations) {
      report.status = SteeringStatus::max_iterations;
      break;
    }
    residual -= Complex{inner(residual, reference).real(), 0.0} * reference;
    residual = residual.resized(options.synthesis.n_max);
    SteeringProblem step{problem.params, problem.horizon, RadialState(3), residual};
    const Synthesis update = synthesize_linearized(step, basis, options.synthesis);
    report.u = report.u + update.v;
    ++report.iterations;
  }
  return report;
}

RadiusTrajectory radius_from_control(const ControlSignal& u, double horizon) {
  if (std::abs(horizon - u.horizon()) > 1e-12 * horizon) {
    throw DomainError("radius_from_control: control horizon differs from T");
  }
  const double mean = u.trapezoid();
  if (std::abs(mean) > 1e-8 * std::max(1.0, horizon * u.max_abs())) {
    throw ConstraintError("radius_from_control: control must have zero mean");
  }
  const auto& s = u.samples();
  const double h = u.step();
  const int m = u.intervals();
  std::vector<double> prefix(s.size(), 0.0);
  for (int i = 1; i <= m; ++i) prefix[i] = prefix[i - 1] + 0.5 * h * (s[i - 1] + s[i]);

  auto cumulative = [&](double g) {
    if (g <= 0.0) return 0.0;
    if (g >= horizon) return prefix[m];
    const int i = std::min(static_cast<int>(g / h), m - 1);
    const double x = g - i * h;
    return prefix[i] + s[i] * x + (s[i + 1] - s[i]) * x * x / (2.0 * h);
  };
  auto rate = [&](double g) { return 4.0 * std::exp(-2.0 * cumulative(g)); };
  auto rk4 = [&](double g, double dt) {
    const double k1 = rate(g);
    const double k2 = rate(g + 0.5 * dt * k1);
    const double k3 = rate(g + 0.5 * dt * k2);
    const double k4 = rate(g + dt * k3);
    return g + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  double max_cumulative = 0.0;
  for (double p : prefix) max_cumulative = std::max(max_cumulative, std::abs(p));
  const double dtau = horizon / 4096.0;
  const long safety = static_cast<long>(std::ceil(1024.0 * std::exp(2.0 * max_cumulative))) + 16;

  RadiusTrajectory out;
  double tau = 0.0, g = 0.0;
  out.taus.push_back(tau);
  out.times.push_back(g);
  out.radii.push_back(1.0);
  for (long step = 0;; ++step) {
    if (step > safety) throw NumericalError("radius_from_control: end time not reached");
    const double next = rk4(g, dtau);
    if (next >= horizon) {
      double lo = 0.0, hi = dtau;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * horizon; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rk4(g, mid) >= horizon ? hi : lo) = mid;
      }
      out.t_star = tau + hi;
      out.taus.push_back(out.t_star);
      out.times.push_back(horizon);
      out.radii.push_back(std::exp(cumulative(horizon)));
      break;
    }
    tau += dtau;
    g = next;
    out.taus.push_back(tau);
    out.times.push_back(g);
    out.radii.push_back(std::exp(cumulative(g)));
  }
  return out;
}

DiscProfile map_fixed_to_disc(const RadialState& psi, const Basis& basis, double u_value,
                              double phase_integral, double radius, int samples) {
  if (!(radius > 0.0)) throw DomainError("map_fixed_to_disc: radius must be positive");
  if (samples < 1) throw DomainError("map_fixed_to_disc: need at least one interval");
  DiscProfile out;
  out.radius = radius;
  for (int i = 0; i <= samples; ++i) {
    const double r = static_cast<double>(i) / samples;
    const Complex phase = std::exp(kI * (u_value * r * r - 4.0 * phase_integral));
    out.rho.push_back(r * radius);
    out.values.push_back(basis.evaluate(psi, r) * phase / radius);
  }
  return out;
}

namespace {

RadialState random_direction(const Basis& basis, int size, int modes, std::mt19937_64& rng) {
  if (modes < 1 || modes > size) throw DomainError("random direction: bad mode count");
  std::normal_distribution<double> normal;
  RadialState out(size);
  for (int k = 1; k <= modes; ++k) {
    const double decay = std::pow(basis.zero(k) / basis.zero(1), -3.5);
    const double re = normal(rng);
    const double im = normal(rng);
    out(k) = decay * Complex{re, im};
  }
  return out;
}

}  // namespace

RadialState random_tangent_target(const Basis& basis, const RadialState& reference, int modes,
                                  double h3_norm, std::mt19937_64& rng) {
  const int size = std::max(reference.size(), modes);
  RadialState out = random_direction(basis, size, modes, rng);
  const double ref_norm2 = std::pow(reference.l2_norm(), 2);
  out -= Complex{inner(out, reference).real() / ref_norm2, 0.0} * reference.resized(size);
  out *= h3_norm / hs_norm(out, 3.0, basis);
  return out;
}

RadialState perturbed_unit_state(const Basis& basis, const RadialState& base, int modes,
                                 double delta, std::mt19937_64& rng) {
  RadialState direction = random_direction(basis, std::max(base.size(), modes), modes, rng);
  direction *= 1.0 / direction.l2_norm();
  return (base + Complex{delta, 0.0} * direction).normalized();
}

std::string radius_csv(const RadiusTrajectory& trajectory) {
  std::ostringstream os;
  os << std::setprecision(17) << "tau,t,R\n";
  for (std::size_t i = 0; i < trajectory.taus.size(); ++i) {
    os << trajectory.taus[i] << ',' << trajectory.times[i] << ',' << trajectory.radii[i] << '\n';
  }
  return os.str();
}

std::string control_csv(const ControlSignal& v) {
  const auto d = v.derivative_samples();
  std::ostringstream os;
  os << std::setprecision(17) << "t,v,w\n";
  for (int i = 0; i <= v.intervals(); ++i) {
    os << v.time(i) << ',' << v.samples()[i] << ',' << d[i] << '\n';
  }
  return os.str();
}

}  // namespace qdisc
