#include "twotime/cli/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"
#include "twotime/state.hpp"

namespace twotime::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw InvalidArgument("config", field, what);
}

std::string join(const std::string& prefix, const char* key) {
  return prefix.empty() ? std::string(key) : prefix + "." + key;
}

const json& require(const json& j, const std::string& prefix, const char* key) {
  if (!j.is_object()) fail(prefix, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(join(prefix, key), "missing required field");
  return *it;
}

double as_double(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

double require_double(const json& j, const std::string& prefix, const char* key) {
  return as_double(require(j, prefix, key), join(prefix, key));
}

double optional_double(const json& j, const std::string& prefix, const char* key,
                       double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as_double(j.at(key), join(prefix, key));
}

std::int64_t as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<std::int64_t>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

// Reject misspelled or unsupported keys instead of silently ignoring
// them; a config block is a closed vocabulary.
void check_keys(const json& j, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(prefix.empty() ? "config" : prefix, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(join(prefix, it.key().c_str()), "unknown field");
  }
}

std::vector<SetConfig> parse_sets(const json& arr, const std::string& prefix) {
  if (!arr.is_array() || arr.empty()) fail(prefix, "expected a non-empty array of sets");
  std::vector<SetConfig> sets;
  for (std::size_t s = 0; s < arr.size(); ++s) {
    const std::string sp = prefix + "[" + std::to_string(s) + "]";
    const json& js = arr[s];
    check_keys(js, sp, {"name", "intervals"});
    SetConfig set;
    set.name = as_string(require(js, sp, "name"), sp + ".name");
    const json& jiv = require(js, sp, "intervals");
    if (!jiv.is_array() || jiv.empty()) fail(sp + ".intervals", "expected a non-empty array");
    for (std::size_t i = 0; i < jiv.size(); ++i) {
      const std::string ip = sp + ".intervals[" + std::to_string(i) + "]";
      const json& pair = jiv[i];
      if (!pair.is_array() || pair.size() != 2) fail(ip, "expected [lo, hi]");
      Interval iv;
      iv.lo = as_double(pair[0], ip + "[0]");
      iv.hi = as_double(pair[1], ip + "[1]");
      set.intervals.push_back(iv);
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

json sets_to_json(const std::vector<SetConfig>& sets) {
  json arr = json::array();
  for (const auto& s : sets) {
    json jiv = json::array();
    for (const auto& iv : s.intervals) jiv.push_back(json::array({iv.lo, iv.hi}));
    arr.push_back(json{{"name", s.name}, {"intervals", std::move(jiv)}});
  }
  return arr;
}

OperatorKind parse_kind(const std::string& s, const std::string& field) {
  if (s == "sharp") return OperatorKind::SharpInterval;
  if (s == "smeared") return OperatorKind::GaussianSmeared;
  fail(field, "expected \"sharp\" or \"smeared\" (got \"" + s + "\")");
}

const char* kind_name(OperatorKind k) {
  return k == OperatorKind::SharpInterval ? "sharp" : "smeared";
}

std::vector<SampleSet> to_sample_sets(const std::vector<SetConfig>& sets) {
  std::vector<SampleSet> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(SampleSet{s.name, s.intervals});
  return out;
}

// "name=lo:hi[;lo:hi...]" — the partition-boundary override grammar.
SetConfig parse_set_override(const std::string& text, const std::string& field) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) fail(field, "expected name=lo:hi[;lo:hi...]");
  SetConfig set;
  set.name = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto end = rest.find(';', pos);
    if (end == std::string::npos) end = rest.size();
    const std::string piece = rest.substr(pos, end - pos);
    const auto colon = piece.find(':');
    if (colon == std::string::npos) fail(field, "interval \"" + piece + "\" is not lo:hi");
    try {
      std::size_t used = 0;
      Interval iv;
      iv.lo = std::stod(piece.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("trailing");
      const std::string hi = piece.substr(colon + 1);
      iv.hi = std::stod(hi, &used);
      if (used != hi.size()) throw std::invalid_argument("trailing");
      set.intervals.push_back(iv);
    } catch (const std::exception&) {
      fail(field, "interval \"" + piece + "\" is not lo:hi");
    }
    pos = end + 1;
  }
  if (set.intervals.empty()) fail(field, "no intervals in \"" + text + "\"");
  return set;
}

void validate_sets(const std::vector<SetConfig>& sets, const std::string& prefix) {
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const std::string sp = prefix + "[" + std::to_string(s) + "]";
    if (sets[s].name.empty()) fail(sp + ".name", "set name must be non-empty");
    for (std::size_t i = 0; i < sets[s].intervals.size(); ++i) {
      const auto& iv = sets[s].intervals[i];
      if (!(iv.hi > iv.lo)) {
        fail(sp + ".intervals[" + std::to_string(i) + "]", "hi must exceed lo");
      }
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "", {"scenario", "grid", "state", "dynamics", "device", "partition",
                     "run", "output", "scan", "analytic", "select"});
  ExperimentConfig cfg;
  cfg.scenario = as_string(require(j, "", "scenario"), "scenario");

  {
    const json& jg = require(j, "", "grid");
    check_keys(jg, "grid", {"x_min", "x_max", "n_points"});
    cfg.grid.x_min = require_double(jg, "grid", "x_min");
    cfg.grid.x_max = require_double(jg, "grid", "x_max");
    cfg.grid.n_points =
        static_cast<int>(as_int(require(jg, "grid", "n_points"), "grid.n_points"));
  }
  {
    const json& js = require(j, "", "state");
    check_keys(js, "state", {"sigma", "p", "center"});
    cfg.state.sigma = require_double(js, "state", "sigma");
    cfg.state.p = require_double(js, "state", "p");
    cfg.state.center = optional_double(js, "state", "center", 0.0);
  }
  {
    const json& jd = require(j, "", "dynamics");
    check_keys(jd, "dynamics", {"mass", "t1", "t2"});
    cfg.dynamics.mass = require_double(jd, "dynamics", "mass");
    cfg.dynamics.t1 = require_double(jd, "dynamics", "t1");
    cfg.dynamics.t2 = require_double(jd, "dynamics", "t2");
  }
  {
    const json& jd = require(j, "", "device");
    check_keys(jd, "device", {"kind", "delta"});
    cfg.device.kind =
        parse_kind(as_string(require(jd, "device", "kind"), "device.kind"), "device.kind");
    cfg.device.delta = require_double(jd, "device", "delta");
  }
  {
    const json& jp = require(j, "", "partition");
    check_keys(jp, "partition", {"first", "second"});
    cfg.partition.first = parse_sets(require(jp, "partition", "first"), "partition.first");
    cfg.partition.second =
        parse_sets(require(jp, "partition", "second"), "partition.second");
  }
  if (j.contains("run")) {
    const json& jr = j.at("run");
    check_keys(jr, "run", {"trials", "seed", "threads", "checkpoints"});
    if (jr.contains("trials")) cfg.run.trials = as_int(jr.at("trials"), "run.trials");
    if (jr.contains("seed")) {
      const json& v = jr.at("seed");
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                     v.get<std::int64_t>() < 0)) {
        fail("run.seed", "expected a non-negative integer");
      }
      cfg.run.seed = v.get<std::uint64_t>();
    }
    if (jr.contains("threads")) {
      cfg.run.threads = static_cast<int>(as_int(jr.at("threads"), "run.threads"));
    }
    if (jr.contains("checkpoints")) {
      const json& jc = jr.at("checkpoints");
      if (!jc.is_array()) fail("run.checkpoints", "expected an array of integers");
      for (std::size_t i = 0; i < jc.size(); ++i) {
        cfg.run.checkpoints.push_back(
            as_int(jc[i], "run.checkpoints[" + std::to_string(i) + "]"));
      }
    }
  }
  if (j.contains("output")) {
    const json& jo = j.at("output");
    check_keys(jo, "output", {"directory", "formats"});
    if (jo.contains("directory")) {
      cfg.output.directory = as_string(jo.at("directory"), "output.directory");
    }
    if (jo.contains("formats")) {
      const json& jf = jo.at("formats");
      if (!jf.is_array() || jf.empty()) fail("output.formats", "expected a non-empty array");
      cfg.output.csv = false;
      cfg.output.json = false;
      for (std::size_t i = 0; i < jf.size(); ++i) {
        const std::string f =
            as_string(jf[i], "output.formats[" + std::to_string(i) + "]");
        if (f == "csv") {
          cfg.output.csv = true;
        } else if (f == "json") {
          cfg.output.json = true;
        } else {
          fail("output.formats[" + std::to_string(i) + "]",
               "expected \"csv\" or \"json\" (got \"" + f + "\")");
        }
      }
    }
  }
  if (j.contains("scan")) {
    const json& js = j.at("scan");
    check_keys(js, "scan", {"axis", "from", "to", "step", "first_set", "second_set"});
    ScanConfig sc;
    sc.axis = as_string(require(js, "scan", "axis"), "scan.axis");
    sc.from = require_double(js, "scan", "from");
    sc.to = require_double(js, "scan", "to");
    sc.step = require_double(js, "scan", "step");
    if (js.contains("first_set")) {
      sc.first_set = as_string(js.at("first_set"), "scan.first_set");
    }
    if (js.contains("second_set")) {
      sc.second_set = as_string(js.at("second_set"), "scan.second_set");
    }
    cfg.scan = sc;
  }
  if (j.contains("analytic")) {
    const json& ja = j.at("analytic");
    check_keys(ja, "analytic", {"x1", "shift_from", "shift_to", "shift_step"});
    AnalyticConfig ac;
    ac.x1 = require_double(ja, "analytic", "x1");
    ac.shift_from = optional_double(ja, "analytic", "shift_from", ac.shift_from);
    ac.shift_to = optional_double(ja, "analytic", "shift_to", ac.shift_to);
    ac.shift_step = optional_double(ja, "analytic", "shift_step", ac.shift_step);
    cfg.analytic = ac;
  }
  if (j.contains("select")) {
    const json& js = j.at("select");
    check_keys(js, "select", {"first_set", "second_set"});
    SelectConfig sel;
    if (js.contains("first_set")) {
      sel.first_set = as_string(js.at("first_set"), "select.first_set");
    }
    if (js.contains("second_set")) {
      sel.second_set = as_string(js.at("second_set"), "select.second_set");
    }
    cfg.select = sel;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("path", "cannot open \"" + path + "\"");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("path", "JSON parse error in \"" + path + "\": " + e.what());
  }
  return parse_config(j);
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& ov) {
  if (ov.seed) cfg.run.seed = *ov.seed;
  if (ov.trials) cfg.run.trials = *ov.trials;
  if (ov.threads) cfg.run.threads = *ov.threads;
  if (ov.out_dir) cfg.output.directory = *ov.out_dir;
  if (ov.format) {
    if (*ov.format == "csv") {
      cfg.output.csv = true;
      cfg.output.json = false;
    } else if (*ov.format == "json") {
      cfg.output.csv = false;
      cfg.output.json = true;
    } else if (*ov.format == "both") {
      cfg.output.csv = true;
      cfg.output.json = true;
    } else {
      fail("--format", "expected csv, json or both (got \"" + *ov.format + "\")");
    }
  }
  if (ov.delta) cfg.device.delta = *ov.delta;
  if (ov.lag) cfg.dynamics.t2 = cfg.dynamics.t1 + *ov.lag;
  if (!ov.first_sets.empty()) {
    cfg.partition.first.clear();
    for (const auto& s : ov.first_sets) {
      cfg.partition.first.push_back(parse_set_override(s, "--first-set"));
    }
  }
  if (!ov.second_sets.empty()) {
    cfg.partition.second.clear();
    for (const auto& s : ov.second_sets) {
      cfg.partition.second.push_back(parse_set_override(s, "--second-set"));
    }
  }
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.scenario.empty()) fail("scenario", "must be non-empty");
  for (char c : cfg.scenario) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') {
      fail("scenario", "names output files; use [A-Za-z0-9_.-] only");
    }
  }
  if (!(cfg.grid.x_max > cfg.grid.x_min)) fail("grid.x_max", "must exceed grid.x_min");
  if (cfg.grid.n_points < 8 || !is_power_of_two(static_cast<std::size_t>(cfg.grid.n_points))) {
    fail("grid.n_points", "must be a power of two, at least 8");
  }
  if (!(cfg.state.sigma > 0.0)) fail("state.sigma", "must be positive");
  if (!(cfg.dynamics.mass > 0.0)) fail("dynamics.mass", "must be positive");
  if (cfg.dynamics.t1 < 0.0) fail("dynamics.t1", "must be non-negative");
  if (!(cfg.dynamics.t2 > cfg.dynamics.t1)) fail("dynamics.t2", "must exceed t1");
  if (!(cfg.device.delta > 0.0)) fail("device.delta", "must be positive");
  validate_sets(cfg.partition.first, "partition.first");
  validate_sets(cfg.partition.second, "partition.second");
  if (cfg.run.trials < 1) fail("run.trials", "must be at least 1");
  if (cfg.run.threads < 1 || cfg.run.threads > 256) fail("run.threads", "must be in [1, 256]");
  for (std::size_t i = 0; i < cfg.run.checkpoints.size(); ++i) {
    const auto c = cfg.run.checkpoints[i];
    if (c < 1 || c > cfg.run.trials) {
      fail("run.checkpoints[" + std::to_string(i) + "]", "must be in [1, trials]");
    }
    if (i > 0 && c <= cfg.run.checkpoints[i - 1]) {
      fail("run.checkpoints[" + std::to_string(i) + "]", "must be strictly increasing");
    }
  }
  if (cfg.output.directory.empty()) fail("output.directory", "must be non-empty");
  if (!cfg.output.csv && !cfg.output.json) fail("output.formats", "at least one format");
  if (cfg.scan) {
    if (cfg.scan->axis != "shift" && cfg.scan->axis != "delta") {
      fail("scan.axis", "expected \"shift\" or \"delta\"");
    }
    if (!(cfg.scan->step > 0.0)) fail("scan.step", "must be positive");
    if (cfg.scan->from > cfg.scan->to) fail("scan.to", "must be >= scan.from");
    if (cfg.scan->axis == "delta" && !(cfg.scan->from > 0.0)) {
      fail("scan.from", "resolutions must be positive");
    }
  }
  if (cfg.analytic) {
    if (!(cfg.analytic->shift_step > 0.0)) fail("analytic.shift_step", "must be positive");
    if (cfg.analytic->shift_from > cfg.analytic->shift_to) {
      fail("analytic.shift_to", "must be >= analytic.shift_from");
    }
  }
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  j["grid"] = {{"x_min", cfg.grid.x_min},
               {"x_max", cfg.grid.x_max},
               {"n_points", cfg.grid.n_points}};
  j["state"] = {{"sigma", cfg.state.sigma}, {"p", cfg.state.p}, {"center", cfg.state.center}};
  j["dynamics"] = {{"mass", cfg.dynamics.mass},
                   {"t1", cfg.dynamics.t1},
                   {"t2", cfg.dynamics.t2}};
  j["device"] = {{"kind", kind_name(cfg.device.kind)}, {"delta", cfg.device.delta}};
  j["partition"] = {{"first", sets_to_json(cfg.partition.first)},
                    {"second", sets_to_json(cfg.partition.second)}};
  json jr = {{"trials", cfg.run.trials}, {"seed", cfg.run.seed}, {"threads", cfg.run.threads}};
  if (!cfg.run.checkpoints.empty()) jr["checkpoints"] = cfg.run.checkpoints;
  j["run"] = std::move(jr);
  json jf = json::array();
  if (cfg.output.csv) jf.push_back("csv");
  if (cfg.output.json) jf.push_back("json");
  j["output"] = {{"directory", cfg.output.directory}, {"formats", std::move(jf)}};
  if (cfg.scan) {
    json js = {{"axis", cfg.scan->axis},
               {"from", cfg.scan->from},
               {"to", cfg.scan->to},
               {"step", cfg.scan->step}};
    if (!cfg.scan->first_set.empty()) js["first_set"] = cfg.scan->first_set;
    if (!cfg.scan->second_set.empty()) js["second_set"] = cfg.scan->second_set;
    j["scan"] = std::move(js);
  }
  if (cfg.analytic) {
    j["analytic"] = {{"x1", cfg.analytic->x1},
                     {"shift_from", cfg.analytic->shift_from},
                     {"shift_to", cfg.analytic->shift_to},
                     {"shift_step", cfg.analytic->shift_step}};
  }
  if (cfg.select) {
    json js = json::object();
    if (!cfg.select->first_set.empty()) js["first_set"] = cfg.select->first_set;
    if (!cfg.select->second_set.empty()) js["second_set"] = cfg.select->second_set;
    j["select"] = std::move(js);
  }
  return j;
}

TwoTimeSpec make_spec(const ExperimentConfig& cfg) {
  const PositionGrid grid =
      PositionGrid::make(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points);
  TwoTimeSpec spec{
      make_gaussian_state(grid, cfg.state.sigma, cfg.state.p, cfg.state.center),
      cfg.dynamics.mass,
      cfg.dynamics.t1,
      cfg.dynamics.t2,
      SamplePartition::build(grid, cfg.device.delta, to_sample_sets(cfg.partition.first)),
      SamplePartition::build(grid, cfg.device.delta, to_sample_sets(cfg.partition.second)),
      cfg.device.kind};
  spec.validate();
  return spec;
}

GaussianExample make_example(const ExperimentConfig& cfg) {
  GaussianExample ex;
  ex.sigma = cfg.state.sigma;
  ex.p = cfg.state.p;
  ex.m = cfg.dynamics.mass;
  ex.delta = cfg.device.delta;
  ex.t = cfg.dynamics.t2 - cfg.dynamics.t1;
  return ex;
}

}  // namespace twotime::cli
