#pragma once

// Option registry binding CLI11 flags to plain variables, so a JSON config
// file can fill whatever the command line left unset and the effective
// configuration can be echoed into the run manifest.

#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace qdisc::cli {

using nlohmann::json;

class OptionSet {
 public:
  explicit OptionSet(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + name, var, help)->capture_default_str();
    fill_.push_back([opt, &var, name](const json& cfg) {
      if (opt->count() == 0 && cfg.contains(name)) var = cfg.at(name).get<T>();
    });
    dump_.push_back([&var, name](json& out) { out[name] = var; });
    return opt;
  }

  /// Values from `cfg` for options absent on the command line. Keys at the top
  /// level apply to every command; an object under the command name overrides.
  void apply(const json& cfg, const std::string& command) const {
    json merged = json::object();
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      if (!it.value().is_object()) merged[it.key()] = it.value();
    }
    if (cfg.contains(command) && cfg.at(command).is_object()) {
      for (auto it = cfg.at(command).begin(); it != cfg.at(command).end(); ++it) {
        merged[it.key()] = it.value();
      }
    }
    for (const auto& f : fill_) f(merged);
  }

  json effective() const {
    json out = json::object();
    for (const auto& d : dump_) d(out);
    return out;
  }

 private:
  CLI::App* app_;
  std::vector<std::function<void(const json&)>> fill_;
  std::vector<std::function<void(json&)>> dump_;
};

}  // namespace qdisc::cli
