#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "qdisc/control.hpp"
#include "qdisc/errors.hpp"
#include "qdisc/io.hpp"

namespace qdisc::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

template <class F>
void parallel_for(int count, int threads, F&& body) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

json check(const std::string& name, bool pass, json details) {
  return {{"name", name}, {"pass", pass}, {"details", std::move(details)}};
}

RadialState load_state(const std::string& path, RunOutput& out) {
  out.add_input(path);
  return io::radial_state_from_json(io::read_json(path));
}

ControlSignal load_control(const std::string& path, RunOutput& out) {
  if (path.empty()) throw DomainError("a --control CSV file is required");
  out.add_input(path);
  return io::control_from_csv(io::read_text(path));
}

}  // namespace

RunOutput::RunOutput(std::filesystem::path dir, std::string command, json config)
    : dir_(std::move(dir)) {
  manifest_ = {{"command", std::move(command)},
               {"version", kVersion},
               {"config", std::move(config)},
               {"inputs", json::object()},
               {"outputs", json::object()}};
}

void RunOutput::write(const std::string& name, const std::string& content) {
  io::write_text(dir_ / name, content);
  manifest_["outputs"][name] = io::fnv1a_hex(content);
}

void RunOutput::write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

void RunOutput::add_input(const std::string& path) {
  manifest_["inputs"][path] = io::fnv1a_hex(io::read_text(path));
}

void RunOutput::finish() { io::write_json(dir_ / "manifest.json", manifest_); }

int run_zeros(const ZerosParams& p, RunOutput& out) {
  const auto table = bessel::compute_zeros(p.nu, p.k, p.tol);
  out.write_json("zeros.json", io::to_json(table));
  std::cout << "wrote " << (p.nu + 1) * p.k << " zeros to " << out.path("zeros.json").string()
            << "\n";
  return kOk;
}

int run_verify(const VerifyParams& p, int threads, RunOutput& out) {
  std::shared_ptr<const bessel::ZeroTable> table;
  if (p.table.empty()) {
    const int k = std::max({p.orthogonality_k, p.identity_k, p.bounds_k, p.nonresonance_n, p.gram_k, 3});
    table = std::make_shared<const bessel::ZeroTable>(bessel::compute_zeros(3, k));
  } else {
    out.add_input(p.table);
    table = std::make_shared<const bessel::ZeroTable>(
        io::zero_table_from_json(io::read_json(p.table)));
  }
  const Basis basis(table);
  const auto& rule = default_rule();
  json checks = json::array();

  {
    const auto problems = table->check_invariants();
    double max_residual = 0.0;
    for (int nu = 0; nu <= table->nu_max(); ++nu) {
      for (int k = 1; k <= table->k_max(); ++k) {
        max_residual = std::max(max_residual, std::abs(bessel::bessel_j(nu, table->zero(nu, k))));
      }
    }
    checks.push_back(check("zero_table", problems.empty() && max_residual <= 1e-11,
                           {{"violations", problems}, {"max_abs_J_at_zero", max_residual}}));
  }

  {
    const int nu_max = std::min(3, table->nu_max());
    const int kk = std::min(p.orthogonality_k, table->k_max());
    const int rows = (nu_max + 1) * kk;
    std::vector<double> worst(static_cast<std::size_t>(rows), 0.0);
    std::vector<std::vector<json>> failures(static_cast<std::size_t>(rows));
    parallel_for(rows, threads, [&](int row) {
      const int nu = row / kk;
      const int k = row % kk + 1;
      const double jk = table->zero(nu, k);
      for (int l = 1; l <= k; ++l) {
        const double jl = table->zero(nu, l);
        const double value = weighted_integral(
            [&](double r) { return bessel::bessel_j(nu, jl * r) * bessel::bessel_j(nu, jk * r); },
            rule).real();
        const double expected = l == k ? 0.5 * std::pow(bessel::bessel_j(nu + 1, jk), 2) : 0.0;
        const double err = std::abs(value - expected);
        worst[row] = std::max(worst[row], err);
        if (err > 1e-9) failures[row].push_back({{"nu", nu}, {"l", l}, {"k", k}, {"error", err}});
      }
    });
    json located = json::array();
    for (const auto& f : failures) {
      for (const auto& e : f) located.push_back(e);
    }
    checks.push_back(check("orthogonality", located.empty(),
                           {{"max_error", *std::max_element(worst.begin(), worst.end())},
                            {"k_max", kk},
                            {"failures", located}}));
  }

  {
    const int kk = std::min(p.identity_k, table->k_max());
    std::vector<double> worst(static_cast<std::size_t>(kk), 0.0);
    parallel_for(kk, threads, [&](int idx) {
      const int k = idx + 1;
      for (int l = 1; l < k; ++l) {
        worst[idx] = std::max(worst[idx], std::abs(coupling_closed_form(l, k, basis) -
                                                   coupling_quadrature(l, k, basis, rule)));
      }
    });
    const double max_err = *std::max_element(worst.begin(), worst.end());
    checks.push_back(check("coupling_identity", max_err <= 1e-9,
                           {{"max_error", max_err}, {"k_max", kk}}));
  }

  {
    const int kk = std::min(p.bounds_k, table->k_max());
    json bounds = json::array();
    bool pass = kk >= 4;
    for (int pp = 1; pp <= 3; ++pp) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (int k = 4; k <= kk; ++k) {
        const double scaled = std::pow(basis.zero(k), 3) * std::abs(coupling_closed_form(pp, k, basis));
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
      }
      pass = pass && lo > 0.0 && std::isfinite(hi);
      bounds.push_back({{"p", pp}, {"lower", lo}, {"upper", hi}});
    }
    checks.push_back(check("coefficient_bounds", pass, {{"k_max", kk}, {"bounds", bounds}}));
  }

  {
    const int n = std::min(p.nonresonance_n, table->k_max());
    const auto report = check_nonresonance(*table, n);
    checks.push_back(check(
        "nonresonance", report.ok() && report.min_gap > 1e-6,
        {{"n_max", n},
         {"min_gap", report.min_gap},
         {"min_gap_between",
          {{report.min_gap_left.n, report.min_gap_left.p},
           {report.min_gap_right.n, report.min_gap_right.p}}},
         {"within_packet_min_gap", report.within_packet_min_gap},
         {"packet_gap", report.packet_gap},
         {"collisions", report.collisions.size()}}));
  }

  {
    const int kk = std::min(p.gram_k, table->k_max());
    const auto freqs = build_frequencies(*table, kk);
    const double horizon = 2.0 * std::numbers::pi / freqs.packet_gap();
    const auto gram = gram_diagnostics(gram_matrix(freqs, horizon, false));
    const auto with_linear = gram_diagnostics(gram_matrix(freqs, horizon, true));
    checks.push_back(check("gram", gram.min_eigenvalue > 0.0 && gram.condition < 1e8,
                           {{"horizon", horizon},
                            {"k", kk},
                            {"exponentials", io::to_json(gram)},
                            {"with_linear", io::to_json(with_linear)}}));

    const auto densities = upper_density(freqs, {10.0, 100.0, 1000.0, 1e4, 1e5},
                                         basis.eigenvalue(3));
    json rows = json::array();
    bool pass = true;
    for (const auto& d : densities) {
      pass = pass && d.estimate <= d.bound;
      rows.push_back({{"r", d.r}, {"count", d.max_count}, {"estimate", d.estimate}, {"bound", d.bound}});
    }
    checks.push_back(check("upper_density", pass, rows));
  }

  bool all = true;
  for (const auto& c : checks) {
    all = all && c.at("pass").get<bool>();
    std::cout << (c.at("pass").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>()
              << "\n";
  }
  out.write_json("verify.json", {{"pass", all}, {"checks", checks}});
  return all ? kOk : kVerificationFailed;
}

int run_synthesize(const SynthesizeParams& p, RunOutput& out) {
  const TargetParams params(p.theta2, p.theta3);
  const int modes = std::max(p.modes, p.n_max);
  const Basis basis = Basis::with_modes(std::max(modes, 3));
  const auto freqs = build_frequencies(basis.table(), p.n_max);
  const double horizon = p.horizon > 0.0 ? p.horizon : default_horizon(freqs);

  SteeringProblem problem{params, horizon, RadialState(3), RadialState()};
  if (!p.psi0.empty()) problem.psi0 = load_state(p.psi0, out);
  if (!p.target.empty()) {
    problem.psif = load_state(p.target, out);
  } else {
    std::mt19937_64 rng(p.seed);
    problem.psif = random_tangent_target(basis, wave_packet(params, horizon, basis, modes),
                                         p.target_modes, p.target_h3, rng);
  }

  const Synthesis result = synthesize_linearized(problem, basis, {p.n_max, p.intervals, 1e12});
  const auto sys = GalerkinSystem::from_basis(basis, modes);
  const RadialState reached = simulate_linearized(result.v, params, sys, horizon);
  const double scale = std::max(result.target.l2_norm(), 1e-300);
  const double error = (reached - result.target.resized(modes)).l2_norm() / scale;

  out.write("control.csv", control_csv(result.v));
  out.write_json("target.json", io::to_json(result.target));
  out.write_json("moment_problem.json", io::to_json(result.problem));
  out.write_json("moment_solution.json", io::to_json(result.solution));
  out.write_json("report.json", {{"horizon", horizon},
                                 {"n_max", p.n_max},
                                 {"modes", modes},
                                 {"frequencies", freqs.size()},
                                 {"gram", io::to_json(result.solution.gram)},
                                 {"max_moment_residual", result.solution.max_residual},
                                 {"max_imag", result.solution.max_imag},
                                 {"admissible", result.v.admissible()},
                                 {"max_abs_v", result.v.max_abs()},
                                 {"relative_endpoint_error", error},
                                 {"warnings", result.solution.warnings}});
  std::cout << "relative endpoint error " << error << ", Gram condition "
            << result.solution.gram.condition << "\n";
  return kOk;
}

int run_simulate(const SimulateParams& p, RunOutput& out) {
  const TargetParams params(p.theta2, p.theta3);
  const Basis basis = Basis::with_modes(std::max(p.modes, 3));
  const auto sys = GalerkinSystem::from_basis(basis, p.modes);
  json report = {{"mode", p.mode}, {"modes", p.modes}, {"steps", p.steps}};

  if (p.mode == "linearized") {
    const ControlSignal v = load_control(p.control, out);
    RadialState initial;
    if (!p.psi0.empty()) initial = load_state(p.psi0, out);
    const RadialState final_state = simulate_linearized(v, params, sys, v.horizon(), initial);
    out.write_json("final_state.json", io::to_json(final_state));
    report["horizon"] = v.horizon();
    out.write_json("report.json", report);
    return kOk;
  }

  Trajectory trajectory;
  SimulationOptions options;
  options.record_every = p.record_every;
  if (p.mode == "free" || p.mode == "bilinear") {
    const RadialState psi0 = p.psi0.empty() ? phi_sharp(params, p.modes) : load_state(p.psi0, out);
    const ControlSignal coefficient = p.mode == "free"
                                          ? ControlSignal::zero(p.horizon, 1)
                                          : bilinear_coefficient(load_control(p.control, out));
    trajectory = simulate_bilinear(psi0, coefficient, sys, p.steps, options);
    report["horizon"] = coefficient.horizon();
  } else if (p.mode == "galerkin-linearized") {
    const ControlSignal v = load_control(p.control, out);
    RadialState initial;
    if (!p.psi0.empty()) initial = load_state(p.psi0, out);
    const auto amp = params.amplitudes();
    const Eigen::MatrixXd m13 = sys.coupling().leftCols(3);
    options.forcing = [&](double t) {
      Eigen::Vector3cd packet;
      for (int q = 0; q < 3; ++q) packet(q) = amp[q] * std::polar(1.0, -sys.lambdas()(q) * t);
      return Eigen::VectorXcd(v.derivative(t) * (m13 * packet));
    };
    const RadialState start = initial.size() > 0 ? initial : RadialState(p.modes);
    trajectory = simulate_bilinear(start, ControlSignal::zero(v.horizon(), 1), sys, p.steps, options);
    report["horizon"] = v.horizon();
  } else {
    throw DomainError("unknown simulation mode '" + p.mode +
                      "' (free, bilinear, linearized, galerkin-linearized)");
  }
  report["max_norm_drift"] = trajectory.max_norm_drift;
  report["warnings"] = trajectory.warnings;
  for (const auto& w : trajectory.warnings) std::cerr << "warning: " << w << "\n";
  out.write("trajectory.csv", trajectory_csv(trajectory));
  out.write_json("final_state.json", io::to_json(trajectory.final_state()));
  out.write_json("report.json", report);
  return kOk;
}

int run_steer(const SteerParams& p, RunOutput& out) {
  const TargetParams params(p.theta2, p.theta3);
  const Basis basis = Basis::with_modes(std::max(p.modes, p.n_max));
  const auto freqs = build_frequencies(basis.table(), p.n_max);
  const double horizon = p.horizon > 0.0 ? p.horizon : default_horizon(freqs);
  const auto sys = GalerkinSystem::from_basis(basis, p.modes);

  std::mt19937_64 rng(p.seed);
  SteeringProblem problem{params, horizon, {}, {}};
  problem.psi0 = p.psi0.empty()
                     ? perturbed_unit_state(basis, phi_sharp(params, p.modes), p.perturbation_modes,
                                            p.delta, rng)
                     : load_state(p.psi0, out);
  problem.psif = p.psif.empty()
                     ? perturbed_unit_state(basis, wave_packet(params, horizon, basis, p.modes),
                                            p.perturbation_modes, p.delta, rng)
                     : load_state(p.psif, out);

  SteeringOptions options;
  options.iterations = p.iterations;
  options.tolerance = p.tolerance;
  options.steps = p.steps;
  options.synthesis = {p.n_max, p.intervals, 1e12};
  const SteeringReport report = steer_local(problem, basis, sys, options);
  const RadiusTrajectory radius = radius_from_control(report.u, horizon);

  out.write("control.csv", control_csv(report.u));
  out.write("radius.csv", radius_csv(radius));
  out.write_json("psi0.json", io::to_json(problem.psi0));
  out.write_json("psif.json", io::to_json(problem.psif));
  out.write_json("steering.json", {{"status", to_string(report.status)},
                                   {"iterations", report.iterations},
                                   {"residuals", report.residuals},
                                   {"horizon", horizon},
                                   {"t_star", radius.t_star},
                                   {"radius_end", radius.radii.back()},
                                   {"max_abs_u", report.u.max_abs()},
                                   {"files",
                                    {out.path("control.csv").string(), out.path("radius.csv").string(),
                                     out.path("psi0.json").string(), out.path("psif.json").string()}}});
  std::cout << "status " << to_string(report.status) << " after " << report.iterations
            << " iterations, residual " << report.residuals.back() << "\n";
  switch (report.status) {
    case SteeringStatus::converged: return kOk;
    case SteeringStatus::diverged: return kNumerical;
    case SteeringStatus::max_iterations: return kVerificationFailed;
  }
  return kNumerical;
}

int run_radius(const RadiusParams& p, RunOutput& out) {
  const ControlSignal u = load_control(p.control, out);
  const RadiusTrajectory radius = radius_from_control(u, u.horizon());
  const auto [lo, hi] = std::minmax_element(radius.radii.begin(), radius.radii.end());
  out.write("radius.csv", radius_csv(radius));
  out.write_json("report.json", {{"t_star", radius.t_star},
                                 {"radius_start", radius.radii.front()},
                                 {"radius_end", radius.radii.back()},
                                 {"radius_min", *lo},
                                 {"radius_max", *hi}});
  std::cout << "T* = " << radius.t_star << "\n";
  return kOk;
}

}  // namespace qdisc::cli
