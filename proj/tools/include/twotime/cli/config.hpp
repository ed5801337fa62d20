#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twotime/gaussian_analytic.hpp"
#include "twotime/two_time.hpp"

namespace twotime::cli {

// Experiment description ingested from a single JSON file. Every block
// maps onto one library concept; validation addresses offending fields
// by their JSON path ("config: grid.n_points: ...").

struct GridConfig {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;
};

struct StateConfig {
  double sigma = 1.0;   // packet width
  double p = 0.0;       // mean momentum
  double center = 0.0;  // packet center at t = 0
};

struct DynamicsConfig {
  double mass = 1.0;
  double t1 = 0.0;
  double t2 = 0.0;
};

struct DeviceConfig {
  OperatorKind kind = OperatorKind::SharpInterval;
  double delta = 0.0;  // measurement resolution
};

struct SetConfig {
  std::string name;
  std::vector<Interval> intervals;
};

struct PartitionConfig {
  std::vector<SetConfig> first;
  std::vector<SetConfig> second;
};

struct RunConfig {
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<std::int64_t> checkpoints;  // empty = doubling defaults
};

struct OutputConfig {
  std::string directory = ".";
  bool csv = true;
  bool json = true;
};

// Scan request of the resolution-difference subcommand: either shift the
// second sample set across displacements ("shift") or sweep the device
// resolution itself ("delta").
struct ScanConfig {
  std::string axis = "shift";
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
  std::string first_set;   // empty = first set of the partition
  std::string second_set;  // empty = first set of the partition
};

// Displacement sweep of the closed-form comparison subcommand: the
// second-time cell center runs over x1 + (p/m)(t2-t1) + shift.
struct AnalyticConfig {
  double x1 = 0.0;
  double shift_from = -3.0;
  double shift_to = 3.0;
  double shift_step = 0.5;
};

// Named set pair an experiment design subcommand acts on (defaults to
// the leading set of each partition).
struct SelectConfig {
  std::string first_set;
  std::string second_set;
};

struct ExperimentConfig {
  std::string scenario;
  GridConfig grid;
  StateConfig state;
  DynamicsConfig dynamics;
  DeviceConfig device;
  PartitionConfig partition;
  RunConfig run;
  OutputConfig output;
  std::optional<ScanConfig> scan;
  std::optional<AnalyticConfig> analytic;
  std::optional<SelectConfig> select;
};

// Command-line overrides layered over the file values before
// validation. Unset optionals leave the file value untouched.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;  // csv | json | both
  std::optional<double> delta;
  std::optional<double> lag;                  // replaces t2 - t1
  std::vector<std::string> first_sets;        // "name=lo:hi[;lo:hi...]"
  std::vector<std::string> second_sets;
};

// Parse + validate. Throws InvalidArgument (module "config") with the
// offending field path on any structural or range problem.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void apply_overrides(ExperimentConfig& cfg, const Overrides& ov);
void validate_config(const ExperimentConfig& cfg);

// Resolved-config echo; parse_config(to_json(cfg)) == cfg.
nlohmann::json to_json(const ExperimentConfig& cfg);

// Build the library objects the scenario runners consume.
TwoTimeSpec make_spec(const ExperimentConfig& cfg);
GaussianExample make_example(const ExperimentConfig& cfg);

}  // namespace twotime::cli
