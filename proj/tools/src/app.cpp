#include "twotime/cli/app.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twotime/cli/config.hpp"
#include "twotime/cli/scenarios.hpp"
#include "twotime/cli/table.hpp"
#include "twotime/errors.hpp"

#ifndef TWOTIME_VERSION
#define TWOTIME_VERSION "0.0.0"
#endif

namespace twotime::cli {
namespace {

using nlohmann::json;

std::string utc_now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json units_legend() {
  return {{"convention", "hbar = 1; L and M are the arbitrary length and mass units"},
          {"position", "L"},
          {"momentum", "1/L"},
          {"mass", "M"},
          {"time", "T = M*L^2"},
          {"probability", "dimensionless"}};
}

struct Command {
  const char* name;
  const char* description;
  json (*run)(const RunContext&);
};

constexpr Command kCommands[] = {
    {"single-time", "Probability of each sample set at its measurement time",
     &run_single_time},
    {"two-time", "Standard and contextual two-time probabilities with their defect",
     &run_two_time},
    {"epsilon-scan",
     "Resolution difference p_delta - p_2delta over a set-shift or resolution range",
     &run_epsilon_scan},
    {"gaussian-analytic", "Numeric point quantities against the Gaussian closed forms",
     &run_gaussian_analytic},
    {"consistency-scan", "Decoherence functional across all first-set pairs",
     &run_consistency_scan},
    {"frequency",
     "Monte Carlo trials: frequency tables, convergence verdicts, rule comparison",
     &run_frequency},
    {"filter-vs-device", "Slit-filter design head-to-head with a full-recorder design",
     &run_filter_vs_device},
};

// Checks beyond the config file's own schema: blocks and set names
// individual subcommands depend on. Runs in the validation phase so the
// failures exit with code 1, not 2.
void validate_for_subcommand(const std::string& name, const ExperimentConfig& cfg,
                             const TwoTimeSpec& spec) {
  const auto require_sharp = [&] {
    if (cfg.device.kind != OperatorKind::SharpInterval) {
      throw InvalidArgument("config", "device.kind",
                            "trial sampling realizes projective collapse; set kind to "
                            "\"sharp\"");
    }
  };
  const auto check_name = [&](const SamplePartition& part, const std::string& set_name,
                              const char* field) {
    if (!set_name.empty() && part.set_index(set_name) < 0) {
      throw InvalidArgument("config", field, "no sample set named \"" + set_name + "\"");
    }
  };
  if (name == "epsilon-scan") {
    if (!cfg.scan) {
      throw InvalidArgument("config", "scan", "epsilon-scan requires a scan block");
    }
    check_name(spec.first, cfg.scan->first_set, "scan.first_set");
    check_name(spec.second, cfg.scan->second_set, "scan.second_set");
  } else if (name == "gaussian-analytic") {
    if (!cfg.analytic) {
      throw InvalidArgument("config", "analytic",
                            "gaussian-analytic requires an analytic block");
    }
    if (cfg.device.kind != OperatorKind::GaussianSmeared) {
      throw InvalidArgument("config", "device.kind",
                            "the closed forms model smeared devices; set kind to "
                            "\"smeared\"");
    }
  } else if (name == "frequency") {
    require_sharp();
  } else if (name == "filter-vs-device") {
    require_sharp();
    if (cfg.select) {
      check_name(spec.first, cfg.select->first_set, "select.first_set");
      check_name(spec.second, cfg.select->second_set, "select.second_set");
    }
  }
}

}  // namespace

int run_app(int argc, const char* const* argv) {
  CLI::App app{"Two-time position measurement probabilities on a 1-D free particle: "
               "the sequential (collapse) rule, the resolution-indexed cell-sum rule, "
               "and repeated-trial frequency simulation."};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  for (const Command& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->add_option("--config", config_path, "Experiment description (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", ov.seed, "Master seed override");
    sub->add_option("--trials", ov.trials, "Trial count override");
    sub->add_option("--threads", ov.threads, "Worker thread count override");
    sub->add_option("--out", ov.out_dir, "Output directory override");
    sub->add_option("--format", ov.format, "Output formats: csv, json or both");
    sub->add_option("--delta", ov.delta, "Device resolution override");
    sub->add_option("--lag", ov.lag, "Time between the measurements (replaces t2 - t1)");
    sub->add_option("--first-set", ov.first_sets,
                    "Replace the first partition: name=lo:hi[;lo:hi...] (repeatable)");
    sub->add_option("--second-set", ov.second_sets,
                    "Replace the second partition: name=lo:hi[;lo:hi...] (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string sub_name = app.get_subcommands().front()->get_name();
  const Command* command = nullptr;
  for (const Command& cmd : kCommands) {
    if (sub_name == cmd.name) command = &cmd;
  }

  // Phase 1: configuration. Any failure here is a validation error.
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    apply_overrides(cfg, ov);
    validate_config(cfg);
    const TwoTimeSpec spec = make_spec(cfg);  // surfaces module precondition errors
    validate_for_subcommand(sub_name, cfg, spec);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 1;
  }

  // Phase 2: execution.
  try {
    const std::filesystem::path out_dir(cfg.output.directory);
    std::filesystem::create_directories(out_dir);
    RunContext ctx{cfg, out_dir, cfg.output.csv, cfg.output.json, &std::cout};
    const json results = command->run(ctx);

    const json resolved = to_json(cfg);
    write_text_file(out_dir / "config.resolved.json", resolved.dump(2) + "\n");
    std::vector<std::string> files = {"config.resolved.json"};
    if (cfg.output.csv) files.push_back(cfg.scenario + ".csv");
    if (cfg.output.json) {
      const json bundle = {{"scenario", cfg.scenario},
                           {"subcommand", sub_name},
                           {"config", resolved},
                           {"meta",
                            {{"version", TWOTIME_VERSION},
                             {"generated_utc", utc_now_iso8601()},
                             {"units", units_legend()}}},
                           {"results", results}};
      write_text_file(out_dir / (cfg.scenario + ".json"), bundle.dump(2) + "\n");
      files.push_back(cfg.scenario + ".json");
    }
    std::cout << "wrote";
    for (const auto& f : files) std::cout << ' ' << (out_dir / f).string();
    std::cout << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace twotime::cli
