// Front-end behavior: config parsing and echo, CSV formatting, the
// result-file schemas, exit codes, and the determinism contract of the
// installed binary (driven as a subprocess, exactly as a user would).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <twotime/cli/config.hpp>
#include <twotime/cli/table.hpp>
#include <twotime/errors.hpp>

#ifndef TWOTIME_CLI_PATH
#error "TWOTIME_CLI_PATH must point at the command-line binary"
#endif

using namespace twotime;
using namespace twotime::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Everything runs under one scratch root wiped at first use.
const fs::path& scratch_root() {
  static const fs::path root = [] {
    const fs::path p = fs::temp_directory_path() / "twotime-cli-test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = scratch_root() / name;
  fs::create_directories(p);
  return p;
}

json base_config() {
  return json{
      {"scenario", "goldens"},
      {"grid", {{"x_min", -24.0}, {"x_max", 24.0}, {"n_points", 512}}},
      {"state", {{"sigma", 1.5}, {"p", 0.8}, {"center", 0.0}}},
      {"dynamics", {{"mass", 1.0}, {"t1", 0.4}, {"t2", 1.2}}},
      {"device", {{"kind", "sharp"}, {"delta", 1.5}}},
      {"partition",
       {{"first", json::array({{{"name", "A"}, {"intervals", {{-3.0, 0.0}}}},
                               {{"name", "B"}, {"intervals", {{0.0, 3.0}}}}})},
        {"second", json::array({{{"name", "V"}, {"intervals", {{0.0, 1.5}}}},
                                {{"name", "W"}, {"intervals", {{1.5, 4.5}}}}})}}},
      {"run", {{"trials", 2000}, {"seed", 42}, {"threads", 2}}},
      {"output", {{"directory", "."}, {"formats", {"csv", "json"}}}}};
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path path = dir / "config.json";
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  return path;
}

// Run the binary; stdout/stderr land in a log next to the outputs.
int run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string(TWOTIME_CLI_PATH) + " " + args + " > " +
                          (dir / "cli.log").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("csv formatting: 17 significant digits round-trip") {
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  CHECK(format_int(-42) == "-42");
  // Parsing the printed form recovers the exact bits.
  const double x = 0.7430131317049501;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("csv table: width checking and quoting") {
  CsvTable t({"name", "value"});
  t.add_row({"plain", "1"});
  t.add_row({"with,comma", "2"});
  t.add_row({"with\"quote", "3"});
  CHECK_THROWS_AS(t.add_row({"too", "many", "fields"}), InternalInconsistency);
  CHECK(t.to_string() ==
        "name,value\n"
        "plain,1\n"
        "\"with,comma\",2\n"
        "\"with\"\"quote\",3\n");
  CHECK(t.rows() == 3);
}

TEST_CASE("config: parse / echo round-trip is exact") {
  json j = base_config();
  j["scan"] = {{"axis", "shift"}, {"from", -3.0}, {"to", 3.0}, {"step", 1.0},
               {"first_set", "A"}, {"second_set", "V"}};
  j["select"] = {{"first_set", "B"}, {"second_set", "W"}};
  const ExperimentConfig cfg = parse_config(j);
  validate_config(cfg);
  const ExperimentConfig again = parse_config(to_json(cfg));
  CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("config: unknown keys and bad values are addressed by field") {
  json j = base_config();
  j["grid"]["n_pts"] = 3;
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("grid"), InvalidArgument);

  j = base_config();
  j["grid"]["n_points"] = 500;
  CHECK_THROWS_WITH_AS(validate_config(parse_config(j)),
                       doctest::Contains("n_points"), InvalidArgument);

  j = base_config();
  j["device"]["kind"] = "fuzzy";
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("device.kind"), InvalidArgument);

  j = base_config();
  j["dynamics"]["t2"] = 0.4;  // equal to t1
  CHECK_THROWS_WITH_AS(validate_config(parse_config(j)), doctest::Contains("t2"),
                       InvalidArgument);
}

TEST_CASE("config: overrides layer over file values") {
  ExperimentConfig cfg = parse_config(base_config());
  Overrides ov;
  ov.seed = 7;
  ov.trials = 500;
  ov.lag = 2.0;
  ov.format = std::string("csv");
  ov.second_sets = {"V=0:3"};
  apply_overrides(cfg, ov);
  CHECK(cfg.run.seed == 7);
  CHECK(cfg.run.trials == 500);
  CHECK(cfg.dynamics.t2 == doctest::Approx(2.4));  // t1 + lag
  CHECK(cfg.output.csv);
  CHECK_FALSE(cfg.output.json);
  REQUIRE(cfg.partition.second.size() == 1);  // set overrides replace the partition
  CHECK(cfg.partition.second[0].name == "V");
  CHECK(cfg.partition.second[0].intervals[0].hi == 3.0);

  Overrides bad;
  bad.format = std::string("xml");
  CHECK_THROWS_AS(apply_overrides(cfg, bad), InvalidArgument);
}

TEST_CASE("cli: result files carry the documented schemas") {
  const fs::path dir = scratch_dir("schemas");
  const fs::path config = write_config(dir, base_config());
  const std::string out = " --out " + (dir / "out").string();

  REQUIRE(run_cli("two-time --config " + config.string() + out, dir) == 0);
  CHECK(first_line(read_file(dir / "out" / "goldens.csv")) ==
        "first_set,second_set,standard,contextual,defect");

  REQUIRE(run_cli("single-time --config " + config.string() + out, dir) == 0);
  CHECK(first_line(read_file(dir / "out" / "goldens.csv")) ==
        "set,time[T],rule,probability");

  REQUIRE(run_cli("consistency-scan --config " + config.string() + out, dir) == 0);
  CHECK(first_line(read_file(dir / "out" / "goldens.csv")) ==
        "first_set_a,first_set_b,second_set,re_d,im_d,defect,p_a,p_b,consistent");

  REQUIRE(run_cli("frequency --config " + config.string() + out, dir) == 0);
  CHECK(first_line(read_file(dir / "out" / "goldens.csv")) ==
        "first_set,second_set,empirical,contextual,standard,defect,z_contextual,"
        "z_standard,trials");
  CHECK(first_line(read_file(dir / "out" / "goldens.cells.csv")) ==
        "x1[L],x2[L],count,frequency,model_probability");
  CHECK(first_line(read_file(dir / "out" / "goldens.convergence.csv")) ==
        "first_set,second_set,checkpoint,frequency");

  json with_select = base_config();
  with_select["select"] = {{"first_set", "B"}, {"second_set", "W"}};
  const fs::path config2 = write_config(scratch_dir("schemas-b"), with_select);
  REQUIRE(run_cli("filter-vs-device --config " + config2.string() + out, dir) == 0);
  CHECK(first_line(read_file(dir / "out" / "goldens.csv")) ==
        "first_set,second_set,filter_rate,recorder_rate,standard_prediction,"
        "contextual_prediction,difference_empirical,difference_predicted,"
        "z_filter_vs_standard,z_recorder_vs_contextual,z_difference,trials");

  json with_scan = base_config();
  with_scan["scan"] = {{"axis", "shift"}, {"from", -2.0}, {"to", 2.0}, {"step", 1.0},
                       {"first_set", "A"}, {"second_set", "V"}};
  with_scan["device"]["delta"] = 0.75;
  const fs::path config3 = write_config(scratch_dir("schemas-c"), with_scan);
  REQUIRE(run_cli("epsilon-scan --config " + config3.string() + out, dir) == 0);
  CHECK(first_line(read_file(dir / "out" / "goldens.csv")) ==
        "axis,value[L],delta[L],displacement[L],p_fine,p_coarse,epsilon,pair_sum,"
        "cross_checked,p_estimate,eps_estimate");

  json analytic = base_config();
  analytic["scenario"] = "closedform";
  analytic["grid"] = {{"x_min", -448.0}, {"x_max", 448.0}, {"n_points", 4096}};
  analytic["state"] = {{"sigma", 100.0}, {"p", 0.3}, {"center", 0.0}};
  analytic["dynamics"] = {{"mass", 1.0}, {"t1", 0.0}, {"t2", 0.8}};
  analytic["device"] = {{"kind", "smeared"}, {"delta", 1.0}};
  analytic["partition"] = {
      {"first", json::array({{{"name", "U1"}, {"intervals", {{9.5, 10.5}}}}})},
      {"second", json::array({{{"name", "U2"}, {"intervals", {{-32.0, 32.0}}}}})}};
  analytic["analytic"] = {{"x1", 10.0}, {"shift_from", -2.0}, {"shift_to", 2.0},
                          {"shift_step", 1.0}};
  const fs::path config4 = write_config(scratch_dir("schemas-d"), analytic);
  REQUIRE(run_cli("gaussian-analytic --config " + config4.string() + out, dir) == 0);
  CHECK(first_line(read_file(dir / "out" / "closedform.csv")) ==
        "displacement[L],x2[L],numeric_p,closed_p,p_ratio,numeric_re_d,numeric_im_d,"
        "closed_re_d,closed_im_d,modulus_ratio");
  CHECK(first_line(read_file(dir / "out" / "closedform.params.csv")) ==
        "sigma[L],p[1/L],mass[M],delta[L],lag[T],r,a,b,c,regime_valid,"
        "oscillation_period[L]");
}

TEST_CASE("cli: result bundle structure and resolved-config round trip") {
  const fs::path dir = scratch_dir("bundle");
  const fs::path config = write_config(dir, base_config());
  REQUIRE(run_cli("two-time --config " + config.string() + " --out " +
                      (dir / "out1").string(),
                  dir) == 0);

  const json bundle = json::parse(read_file(dir / "out1" / "goldens.json"));
  CHECK(bundle.at("scenario") == "goldens");
  CHECK(bundle.at("subcommand") == "two-time");
  CHECK(bundle.contains("config"));
  CHECK(bundle.contains("results"));
  CHECK(bundle.at("meta").contains("generated_utc"));
  CHECK_FALSE(bundle.at("meta").at("version").get<std::string>().empty());
  CHECK(bundle.at("meta").at("units").contains("position"));
  CHECK(bundle.at("results").contains("rows"));
  CHECK(bundle.at("results").at("overlap_factor").at("first") == 1.0);

  // The echoed config is the one that was run: feeding it back in
  // reproduces the CSV byte for byte.
  const json resolved = json::parse(read_file(dir / "out1" / "config.resolved.json"));
  CHECK(resolved == bundle.at("config"));
  const fs::path config2 = dir / "resolved.json";
  {
    std::ofstream out(config2);
    out << resolved.dump(2) << "\n";
  }
  REQUIRE(run_cli("two-time --config " + config2.string() + " --out " +
                      (dir / "out2").string(),
                  dir) == 0);
  CHECK(read_file(dir / "out1" / "goldens.csv") == read_file(dir / "out2" / "goldens.csv"));
}

TEST_CASE("cli: identical seeds give byte-identical tables, any thread count") {
  const fs::path dir = scratch_dir("determinism");
  const fs::path config = write_config(dir, base_config());

  REQUIRE(run_cli("frequency --config " + config.string() + " --threads 1 --out " +
                      (dir / "t1").string(),
                  dir) == 0);
  REQUIRE(run_cli("frequency --config " + config.string() + " --threads 4 --out " +
                      (dir / "t4").string(),
                  dir) == 0);
  for (const char* name : {"goldens.csv", "goldens.cells.csv", "goldens.convergence.csv"}) {
    CHECK(read_file(dir / "t1" / name) == read_file(dir / "t4" / name));
  }

  // A different seed is a different experiment.
  REQUIRE(run_cli("frequency --config " + config.string() +
                      " --seed 7 --threads 1 --out " + (dir / "s7").string(),
                  dir) == 0);
  CHECK(read_file(dir / "t1" / "goldens.cells.csv") !=
        read_file(dir / "s7" / "goldens.cells.csv"));
}

TEST_CASE("cli: exit codes separate bad input from runtime faults") {
  const fs::path dir = scratch_dir("exits");

  SUBCASE("missing config file") {
    CHECK(run_cli("two-time --config " + (dir / "nope.json").string(), dir) == 1);
  }
  SUBCASE("invalid grid size") {
    json j = base_config();
    j["grid"]["n_points"] = 500;
    const fs::path config = write_config(dir, j);
    CHECK(run_cli("two-time --config " + config.string() + " --out " +
                      (dir / "out").string(),
                  dir) == 1);
    const std::string log = read_file(dir / "cli.log");
    CHECK(log.find("config: grid.n_points") != std::string::npos);
  }
  SUBCASE("resolution override below the grid floor") {
    const fs::path config = write_config(dir, base_config());
    CHECK(run_cli("two-time --config " + config.string() + " --delta 0.015 --out " +
                      (dir / "out").string(),
                  dir) == 1);
  }
  SUBCASE("smeared devices cannot feed the trial sampler") {
    json j = base_config();
    j["device"]["kind"] = "smeared";
    const fs::path config = write_config(dir, j);
    CHECK(run_cli("frequency --config " + config.string() + " --out " +
                      (dir / "out").string(),
                  dir) == 1);
  }
  SUBCASE("scan that walks a set off the grid fails at run time") {
    json j = base_config();
    j["scan"] = {{"axis", "shift"}, {"from", 0.0}, {"to", 40.0}, {"step", 20.0},
                 {"first_set", "A"}, {"second_set", "V"}};
    j["device"]["delta"] = 0.75;
    const fs::path config = write_config(dir, j);
    CHECK(run_cli("epsilon-scan --config " + config.string() + " --out " +
                      (dir / "out").string(),
                  dir) == 2);
  }
  SUBCASE("no subcommand prints usage and fails") {
    CHECK(run_cli("", dir) == 1);
    CHECK(run_cli("--help", dir) == 0);
  }
}
