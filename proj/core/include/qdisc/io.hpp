#pragma once

// JSON and CSV serialisation plus small file helpers.

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "qdisc/bessel.hpp"
#include "qdisc/control_signal.hpp"
#include "qdisc/moment.hpp"
#include "qdisc/spectral.hpp"

namespace qdisc::io {

using nlohmann::json;

/// {"tol", "nu_max", "k_max", "zeros": [{"nu", "k", "value"}, ...]}
json to_json(const bessel::ZeroTable& table);
/// Rebuilds the table without re-certifying it; callers decide whether to run
/// check_invariants().
bessel::ZeroTable zero_table_from_json(const json& j);

/// [[re, im], ...]
json to_json(const RadialState& state);
RadialState radial_state_from_json(const json& j);

json to_json(const FrequencySet& freqs);
json to_json(const MomentProblem& problem);
json to_json(const GramDiagnostics& gram);
json to_json(const MomentSolution& solution);

/// Reads a uniform-grid control CSV with a header line; column 0 is time,
/// column 1 the value and an optional column 2 the derivative.
ControlSignal control_from_csv(const std::string& text);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& data);
std::uint64_t fnv1a(const std::string& data);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);
json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace qdisc::io
