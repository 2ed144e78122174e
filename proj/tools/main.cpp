#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "commands.hpp"
#include "options.hpp"
#include "qdisc/errors.hpp"
#include "qdisc/io.hpp"

using namespace qdisc::cli;

int main(int argc, char** argv) {
  CLI::App app{"Deformation-control synthesis for a radial quantum particle in a disc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  app.add_option("--config", config_path, "JSON config; flags override its values")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for verification sweeps")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();

  ZerosParams zeros;
  auto* zeros_cmd = app.add_subcommand("zeros", "Compute a table of Bessel zeros");
  OptionSet zeros_opts(zeros_cmd);
  zeros_opts.add("nu", zeros.nu, "Largest order")->check(CLI::Range(0, 64));
  zeros_opts.add("k", zeros.k, "Zeros per order")->check(CLI::Range(1, 100000));
  zeros_opts.add("tol", zeros.tol, "Absolute accuracy");

  VerifyParams verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check zeros, couplings, non-resonance and Gram bounds");
  OptionSet verify_opts(verify_cmd);
  verify_opts.add("table", verify.table, "Zero table JSON (computed when omitted)");
  verify_opts.add("orthogonality-k", verify.orthogonality_k, "Index bound of the orthogonality sweep");
  verify_opts.add("identity-k", verify.identity_k, "Index bound of the coupling identity sweep");
  verify_opts.add("bounds-k", verify.bounds_k, "Index bound of the coefficient bounds");
  verify_opts.add("nonresonance-n", verify.nonresonance_n, "Mode bound of the non-resonance scan");
  verify_opts.add("gram-k", verify.gram_k, "Mode bound of the Gram diagnostics");

  SynthesizeParams synth;
  auto* synth_cmd = app.add_subcommand("synthesize", "Synthesize a linearised control");
  OptionSet synth_opts(synth_cmd);
  synth_opts.add("theta2", synth.theta2, "Weight of mode 2");
  synth_opts.add("theta3", synth.theta3, "Weight of mode 3");
  synth_opts.add("T", synth.horizon, "Horizon (0: max(1, 2pi/gap))");
  synth_opts.add("K", synth.n_max, "Mode cutoff of the frequency set")->check(CLI::Range(3, 500));
  synth_opts.add("N", synth.modes, "Galerkin modes for the check simulation")->check(CLI::Range(3, 500));
  synth_opts.add("intervals", synth.intervals, "Control sample intervals")->check(CLI::Range(1, 1 << 24));
  synth_opts.add("target", synth.target, "Target state JSON (random when omitted)");
  synth_opts.add("psi0", synth.psi0, "Initial state JSON (zero when omitted)");
  synth_opts.add("seed", synth.seed, "Seed of the random target");
  synth_opts.add("target-modes", synth.target_modes, "Modes of the random target");
  synth_opts.add("target-h3", synth.target_h3, "H3 norm of the random target");

  SimulateParams sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the Galerkin simulators");
  OptionSet sim_opts(sim_cmd);
  sim_opts.add("mode", sim.mode, "free | bilinear | linearized | galerkin-linearized");
  sim_opts.add("control", sim.control, "Control CSV (t,value[,derivative])");
  sim_opts.add("psi0", sim.psi0, "Initial state JSON");
  sim_opts.add("theta2", sim.theta2, "Weight of mode 2");
  sim_opts.add("theta3", sim.theta3, "Weight of mode 3");
  sim_opts.add("T", sim.horizon, "Horizon of free evolution");
  sim_opts.add("N", sim.modes, "Galerkin modes")->check(CLI::Range(3, 500));
  sim_opts.add("steps", sim.steps, "Time steps")->check(CLI::Range(1, 1 << 24));
  sim_opts.add("record-every", sim.record_every, "Trajectory output stride (0: endpoints)");

  SteerParams steer;
  auto* steer_cmd = app.add_subcommand("steer", "Local nonlinear steering and radius reconstruction");
  OptionSet steer_opts(steer_cmd);
  steer_opts.add("theta2", steer.theta2, "Weight of mode 2");
  steer_opts.add("theta3", steer.theta3, "Weight of mode 3");
  steer_opts.add("T", steer.horizon, "Horizon (0: max(1, 2pi/gap))");
  steer_opts.add("delta", steer.delta, "Size of the random perturbations");
  steer_opts.add("seed", steer.seed, "Seed of the perturbations");
  steer_opts.add("perturbation-modes", steer.perturbation_modes, "Modes of the perturbations");
  steer_opts.add("K", steer.n_max, "Mode cutoff of the frequency set")->check(CLI::Range(3, 500));
  steer_opts.add("N", steer.modes, "Galerkin modes")->check(CLI::Range(3, 500));
  steer_opts.add("steps", steer.steps, "Time steps per simulation")->check(CLI::Range(1, 1 << 24));
  steer_opts.add("intervals", steer.intervals, "Control sample intervals")->check(CLI::Range(1, 1 << 24));
  steer_opts.add("iterations", steer.iterations, "Maximum Newton updates");
  steer_opts.add("tolerance", steer.tolerance, "Endpoint residual target");
  steer_opts.add("psi0", steer.psi0, "Initial state JSON");
  steer_opts.add("psif", steer.psif, "Final state JSON");

  RadiusParams radius;
  auto* radius_cmd = app.add_subcommand("radius", "Reconstruct R(tau) from a control");
  OptionSet radius_opts(radius_cmd);
  radius_opts.add("control", radius.control, "Control CSV (t,u[,...])");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    nlohmann::json config = nlohmann::json::object();
    if (!config_path.empty()) config = qdisc::io::read_json(config_path);
    if (!config.is_object()) throw qdisc::DomainError("config must be a JSON object");

    auto run = [&](const OptionSet& opts, const std::string& name, auto&& body) {
      opts.apply(config, name);
      RunOutput out(out_dir, name, opts.effective());
      if (!config_path.empty()) out.add_input(config_path);
      const int code = body(out);
      out.finish();
      return code;
    };

    if (zeros_cmd->parsed()) {
      return run(zeros_opts, "zeros", [&](RunOutput& o) { return run_zeros(zeros, o); });
    }
    if (verify_cmd->parsed()) {
      return run(verify_opts, "verify", [&](RunOutput& o) { return run_verify(verify, threads, o); });
    }
    if (synth_cmd->parsed()) {
      return run(synth_opts, "synthesize", [&](RunOutput& o) { return run_synthesize(synth, o); });
    }
    if (sim_cmd->parsed()) {
      return run(sim_opts, "simulate", [&](RunOutput& o) { return run_simulate(sim, o); });
    }
    if (steer_cmd->parsed()) {
      return run(steer_opts, "steer", [&](RunOutput& o) { return run_steer(steer, o); });
    }
    if (radius_cmd->parsed()) {
      return run(radius_opts, "radius", [&](RunOutput& o) { return run_radius(radius, o); });
    }
  } catch (const qdisc::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const qdisc::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
