#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "twotime/cli/config.hpp"

namespace twotime::cli {

// Everything a scenario runner needs: the validated config, where to
// write, and which formats the caller asked for. Runners write their CSV
// files themselves (some emit more than one) and return the `results`
// object of the JSON bundle; the app wraps it with config echo and
// metadata.
struct RunContext {
  ExperimentConfig config;
  std::filesystem::path out_dir;
  bool write_csv = true;
  bool write_json = true;
  std::ostream* log = nullptr;  // summary lines; null = quiet
};

nlohmann::json run_single_time(const RunContext& ctx);
nlohmann::json run_two_time(const RunContext& ctx);
nlohmann::json run_epsilon_scan(const RunContext& ctx);
nlohmann::json run_gaussian_analytic(const RunContext& ctx);
nlohmann::json run_consistency_scan(const RunContext& ctx);
nlohmann::json run_frequency(const RunContext& ctx);
nlohmann::json run_filter_vs_device(const RunContext& ctx);

}  // namespace twotime::cli
