#include "qdisc/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc::io {

json to_json(const bessel::ZeroTable& table) {
  json zeros = json::array();
  for (int nu = 0; nu <= table.nu_max(); ++nu) {
    for (int k = 1; k <= table.k_max(); ++k) {
      zeros.push_back({{"nu", nu}, {"k", k}, {"value", table.zero(nu, k)}});
    }
  }
  return {{"tol", table.tol()}, {"nu_max", table.nu_max()}, {"k_max", table.k_max()},
          {"zeros", zeros}};
}

bessel::ZeroTable zero_table_from_json(const json& j) {
  try {
    const int nu_max = j.at("nu_max").get<int>();
    const int k_max = j.at("k_max").get<int>();
    const double tol = j.at("tol").get<double>();
    if (nu_max < 0 || k_max < 1) throw DomainError("zero table: bad bounds");
    std::vector<std::vector<double>> zeros(static_cast<std::size_t>(nu_max) + 1,
                                           std::vector<double>(static_cast<std::size_t>(k_max), 0.0));
    std::vector<std::vector<bool>> seen(zeros.size(), std::vector<bool>(zeros[0].size(), false));
    for (const auto& entry : j.at("zeros")) {
      const int nu = entry.at("nu").get<int>();
      const int k = entry.at("k").get<int>();
      if (nu < 0 || nu > nu_max || k < 1 || k > k_max) {
        throw DomainError("zero table: entry (" + std::to_string(nu) + "," + std::to_string(k) +
                          ") out of bounds");
      }
      zeros[nu][k - 1] = entry.at("value").get<double>();
      seen[nu][k - 1] = true;
    }
    for (const auto& row : seen) {
      for (bool s : row) {
        if (!s) throw DomainError("zero table: missing entries");
      }
    }
    return bessel::ZeroTable(nu_max, k_max, tol, std::move(zeros));
  } catch (const json::exception& e) {
    throw DomainError(std::string("zero table: malformed JSON: ") + e.what());
  }
}

json to_json(const RadialState& state) {
  json out = json::array();
  for (const auto& c : state.coeffs()) out.push_back({c.real(), c.imag()});
  return out;
}

RadialState radial_state_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("radial state: expected an array of [re, im] pairs");
  std::vector<Complex> coeffs;
  try {
    for (const auto& pair : j) {
      if (!pair.is_array() || pair.size() != 2) {
        throw DomainError("radial state: expected [re, im] pairs");
      }
      coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("radial state: malformed JSON: ") + e.what());
  }
  return RadialState(std::move(coeffs));
}

json to_json(const FrequencySet& freqs) {
  json out = json::array();
  for (const auto& f : freqs.entries()) out.push_back({{"omega", f.omega}, {"n", f.n}, {"p", f.p}});
  return out;
}

json to_json(const MomentProblem& problem) {
  json d = json::array();
  for (const auto& v : problem.d) d.push_back({v.real(), v.imag()});
  return {{"horizon", problem.horizon},
          {"packet_gap", problem.freqs.packet_gap()},
          {"frequencies", to_json(problem.freqs)},
          {"d", d},
          {"d_tilde", problem.d_tilde}};
}

json to_json(const GramDiagnostics& gram) {
  return {{"size", gram.size},
          {"ingham_lower", gram.min_eigenvalue},
          {"ingham_upper", gram.max_eigenvalue},
          {"condition", gram.condition}};
}

json to_json(const MomentSolution& solution) {
  json coeffs = json::array();
  for (std::size_t i = 0; i < solution.w.omegas().size(); ++i) {
    const auto c = solution.w.coeffs()[i];
    coeffs.push_back({{"omega", solution.w.omegas()[i]}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"max_residual", solution.max_residual},
          {"max_imag", solution.max_imag},
          {"jittered", solution.jittered},
          {"gram", to_json(solution.gram)},
          {"warnings", solution.warnings},
          {"coefficients", coeffs},
          {"linear", {solution.w.linear().real(), solution.w.linear().imag()}}};
}

ControlSignal control_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("control CSV: empty input");
  std::vector<double> times, values, derivative;
  bool has_derivative = true;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DomainError("control CSV: bad number on line " + std::to_string(row));
      }
    }
    if (cells.size() < 2) throw DomainError("control CSV: need t and value columns");
    times.push_back(cells[0]);
    values.push_back(cells[1]);
    if (cells.size() >= 3) {
      derivative.push_back(cells[2]);
    } else {
      has_derivative = false;
    }
  }
  if (times.size() < 2) throw DomainError("control CSV: need at least two rows");
  const double horizon = times.back();
  const double h = horizon / static_cast<double>(times.size() - 1);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - h * static_cast<double>(i)) > 1e-9 * std::max(1.0, horizon)) {
      throw DomainError("control CSV: time grid is not uniform from 0");
    }
  }
  if (!has_derivative) return ControlSignal(horizon, std::move(values));
  return ControlSignal(horizon, std::move(values), std::move(derivative));
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string fnv1a_hex(const std::string& data) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(data);
  return os.str();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << content;
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace qdisc::io
