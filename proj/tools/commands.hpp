#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qdisc::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kNumerical = 3 };

/// Collects output files and writes manifest.json with content hashes.
class RunOutput {
 public:
  RunOutput(std::filesystem::path dir, std::string command, json config);

  void write(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const json& j);
  void add_input(const std::string& path);
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  /// Writes manifest.json; call last.
  void finish();

 private:
  std::filesystem::path dir_;
  json manifest_;
};

struct ZerosParams {
  int nu = 0;
  int k = 64;
  double tol = 1e-12;
};

struct VerifyParams {
  std::string table;
  int orthogonality_k = 30;
  int identity_k = 40;
  int bounds_k = 200;
  int nonresonance_n = 500;
  int gram_k = 30;
};

struct SynthesizeParams {
  double theta2 = 0.25;
  double theta3 = 0.25;
  double horizon = 0.0;  // 0 selects max(1, 2π/γ̃)
  int n_max = 20;
  int modes = 40;
  int intervals = 1 << 18;
  std::string target;
  std::string psi0;
  unsigned long long seed = 1;
  int target_modes = 10;
  double target_h3 = 0.5;
};

struct SimulateParams {
  std::string mode = "bilinear";
  std::string control;
  std::string psi0;
  double theta2 = 0.25;
  double theta3 = 0.25;
  double horizon = 1.0;  // free evolution only; otherwise taken from the control
  int modes = 40;
  int steps = 1 << 14;
  int record_every = 256;
};

struct SteerParams {
  double theta2 = 0.25;
  double theta3 = 0.25;
  double horizon = 0.0;
  double delta = 1e-3;
  unsigned long long seed = 1;
  int perturbation_modes = 10;
  int n_max = 20;
  int modes = 40;
  int steps = 1 << 14;
  int intervals = 1 << 18;
  int iterations = 4;
  double tolerance = 1e-8;
  std::string psi0;
  std::string psif;
};

struct RadiusParams {
  std::string control;
};

int run_zeros(const ZerosParams& p, RunOutput& out);
int run_verify(const VerifyParams& p, int threads, RunOutput& out);
int run_synthesize(const SynthesizeParams& p, RunOutput& out);
int run_simulate(const SimulateParams& p, RunOutput& out);
int run_steer(const SteerParams& p, RunOutput& out);
int run_radius(const RadiusParams& p, RunOutput& out);

}  // namespace qdisc::cli
