#include "twotime/cli/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "twotime/cli/table.hpp"
#include "twotime/errors.hpp"
#include "twotime/frequency.hpp"
#include "twotime/gaussian_analytic.hpp"
#include "twotime/numeric.hpp"
#include "twotime/sampler.hpp"
#include "twotime/stats.hpp"
#include "twotime/two_time.hpp"

namespace twotime::cli {
namespace {

using nlohmann::json;

std::filesystem::path table_path(const RunContext& ctx, const std::string& suffix) {
  return ctx.out_dir / (ctx.config.scenario + suffix + ".csv");
}

void emit(const RunContext& ctx, const CsvTable& table, const std::string& suffix = "") {
  if (ctx.write_csv) table.write(table_path(ctx, suffix));
}

void note(const RunContext& ctx, const std::string& line) {
  if (ctx.log) *ctx.log << line << '\n';
}

int set_index_or_fail(const SamplePartition& part, const std::string& name,
                      const char* field) {
  if (name.empty()) return 0;
  const int i = part.set_index(name);
  if (i < 0) {
    throw InvalidArgument("config", field, "no sample set named \"" + name + "\"");
  }
  return i;
}

// Covering span of a sample set: used for the displacement of coarse-set
// estimates. Scan scenarios use single-interval sets, where the span is
// the set itself.
struct Span {
  double lo = 0.0, hi = 0.0;
  double center() const { return 0.5 * (lo + hi); }
  double length() const { return hi - lo; }
};

Span span_of(const SampleSet& set) {
  Span s{set.intervals.front().lo, set.intervals.front().hi};
  for (const auto& iv : set.intervals) {
    s.lo = std::min(s.lo, iv.lo);
    s.hi = std::max(s.hi, iv.hi);
  }
  return s;
}

const char* verdict_name(Verdict v) {
  return v == Verdict::Converged ? "converged" : "inconclusive";
}

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

std::vector<double> scan_values(const ScanConfig& sc) {
  std::vector<double> vals;
  // Half-step slack absorbs accumulated rounding at the top end.
  for (double v = sc.from; v <= sc.to + 0.5 * sc.step; v += sc.step) vals.push_back(v);
  if (vals.size() > 100000) {
    throw InvalidArgument("config", "scan.step", "scan exceeds 100000 points");
  }
  return vals;
}

ExperimentConfig shifted_config(const ExperimentConfig& base, double shift) {
  ExperimentConfig cfg = base;
  // The whole second partition moves rigidly, so set disjointness is
  // preserved at any shift.
  for (auto& set : cfg.partition.second) {
    for (auto& iv : set.intervals) {
      iv.lo += shift;
      iv.hi += shift;
    }
  }
  return cfg;
}

// Composite-midpoint refinement of the double cell sum: the same set
// pair sampled at half-cell spacing. If treating minimal-cell
// probabilities as a density integrated over the sets is a good
// approximation, this agrees with the plain cell sum.
double refined_cell_quadrature(const TwoTimeEngine& engine, int i, int j) {
  const auto& first = engine.spec().first;
  const auto& second = engine.spec().second;
  const double q1 = first.delta() / 4.0;
  const double q2 = second.delta() / 4.0;
  NeumaierSum sum;
  for (const Cell& a : first.cells(i)) {
    for (const double x1 : {a.center - q1, a.center + q1}) {
      for (const Cell& b : second.cells(j)) {
        for (const double x2 : {b.center - q2, b.center + q2}) {
          sum.add(engine.point_probability(x1, x2) / 4.0);
        }
      }
    }
  }
  return sum.value();
}

}  // namespace

json run_single_time(const RunContext& ctx) {
  const TwoTimeSpec spec = make_spec(ctx.config);
  const TwoTimeEngine engine(spec);

  CsvTable table({"set", "time[T]", "rule", "probability"});
  json rows = json::array();
  for (int i = 0; i < spec.first.set_count(); ++i) {
    const double p = engine.single_time_probability(i);
    table.add_row({spec.first.set(i).name, format_double(spec.t1), "single_time",
                   format_double(p)});
    rows.push_back({{"set", spec.first.set(i).name},
                    {"time", spec.t1},
                    {"rule", "single_time"},
                    {"probability", p}});
  }
  for (int j = 0; j < spec.second.set_count(); ++j) {
    const double p = engine.single_time_at_t2(j);
    table.add_row({spec.second.set(j).name, format_double(spec.t2), "single_time",
                   format_double(p)});
    rows.push_back({{"set", spec.second.set(j).name},
                    {"time", spec.t2},
                    {"rule", "single_time"},
                    {"probability", p}});
  }
  emit(ctx, table);
  note(ctx, "single-time: " + std::to_string(table.rows()) + " set probabilities");
  return json{{"rows", std::move(rows)}};
}

json run_two_time(const RunContext& ctx) {
  const TwoTimeSpec spec = make_spec(ctx.config);
  const TwoTimeEngine engine(spec);

  CsvTable table({"first_set", "second_set", "standard", "contextual", "defect"});
  json rows = json::array();
  double max_defect = 0.0;
  for (int i = 0; i < spec.first.set_count(); ++i) {
    for (int j = 0; j < spec.second.set_count(); ++j) {
      const double std_p = engine.standard_two_time(i, j);
      const double ctx_p = engine.contextual_two_time(i, j);
      const double defect = std_p - ctx_p;
      max_defect = std::max(max_defect, std::abs(defect));
      table.add_row({spec.first.set(i).name, spec.second.set(j).name,
                     format_double(std_p), format_double(ctx_p), format_double(defect)});
      rows.push_back({{"first_set", spec.first.set(i).name},
                      {"second_set", spec.second.set(j).name},
                      {"standard", std_p},
                      {"contextual", ctx_p},
                      {"defect", defect}});
    }
  }
  emit(ctx, table);
  note(ctx, "two-time: " + std::to_string(table.rows()) +
                " pairs, max |standard - contextual| = " + format_double(max_defect));

  // Device-model diagnostics: tiling over-completeness (1 exactly for
  // sharp cells) and the finite-dot-size ambiguity bound of each set.
  json bounds_first = json::object(), bounds_second = json::object();
  for (const auto& set : spec.first.sets()) {
    bounds_first[set.name] = boundary_ambiguity_bound(set, spec.first.delta());
  }
  for (const auto& set : spec.second.sets()) {
    bounds_second[set.name] = boundary_ambiguity_bound(set, spec.second.delta());
  }
  return json{{"rows", std::move(rows)},
              {"overlap_factor",
               {{"first", engine.first_overlap_factor()},
                {"second", engine.second_overlap_factor()}}},
              {"ambiguity_bound", {{"first", std::move(bounds_first)},
                                   {"second", std::move(bounds_second)}}}};
}

json run_epsilon_scan(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  if (!cfg.scan) {
    throw InvalidArgument("config", "scan", "epsilon-scan requires a scan block");
  }
  const ScanConfig& sc = *cfg.scan;
  const std::vector<double> vals = scan_values(sc);
  const GaussianExample ex = make_example(cfg);

  // Resolve the scanned pair and its geometry on the base arrangement.
  const TwoTimeSpec base = make_spec(cfg);
  const int i = set_index_or_fail(base.first, sc.first_set, "scan.first_set");
  const int j = set_index_or_fail(base.second, sc.second_set, "scan.second_set");
  const Span first_span = span_of(base.first.set(i));
  const Span second_span = span_of(base.second.set(j));
  const double flight = (ex.p / ex.m) * ex.t;

  // Calibrate the order-of-magnitude prefactors at zero displacement
  // (shift axis only; the delta axis keeps the sets fixed).
  CoarseCalibration calib;
  json calibration = nullptr;
  json integral_form = nullptr;
  if (sc.axis == "shift") {
    const double shift0 = first_span.center() + flight - second_span.center();
    const TwoTimeEngine eng0(make_spec(shifted_config(cfg, shift0)));
    const ResolutionDifference rd0 = eng0.resolution_difference(i, j, cfg.device.delta);
    const CoarseSetSpec coarse0{first_span.center(), second_span.center() + shift0,
                                second_span.length()};
    calib = calibrate_coarse(ex, coarse0, rd0.p_fine, rd0.epsilon);
    calibration = {{"shift", shift0},
                   {"p_at_zero", rd0.p_fine},
                   {"epsilon_at_zero", rd0.epsilon},
                   {"k", calib.k},
                   {"kprime", calib.kprime},
                   {"kprime_valid", calib.kprime_valid}};
    const double refined = refined_cell_quadrature(eng0, i, j);
    integral_form = {{"cell_sum", rd0.p_fine},
                     {"half_cell_quadrature", refined},
                     {"ratio", rd0.p_fine > 0.0 ? refined / rd0.p_fine : 0.0}};
  }

  CsvTable table({"axis", "value[L]", "delta[L]", "displacement[L]", "p_fine", "p_coarse",
                  "epsilon", "pair_sum", "cross_checked", "p_estimate", "eps_estimate"});
  json rows = json::array();
  std::vector<double> displacements, epsilons;
  std::optional<TwoTimeEngine> base_engine;  // shared by the fixed-set delta axis
  if (sc.axis == "delta") base_engine.emplace(base);
  for (const double v : vals) {
    double delta = cfg.device.delta;
    double displacement = second_span.center() - first_span.center() - flight;
    ResolutionDifference rd;
    GaussianExample row_ex = ex;
    CoarseSetSpec coarse{first_span.center(), second_span.center(), second_span.length()};
    if (sc.axis == "shift") {
      const TwoTimeEngine eng(make_spec(shifted_config(cfg, v)));
      rd = eng.resolution_difference(i, j, delta);
      displacement += v;
      coarse.x2 += v;
    } else {
      delta = v;
      row_ex.delta = v;
      rd = base_engine->resolution_difference(i, j, delta);
    }
    const CoarseEstimates est = coarse_set_estimates(row_ex, coarse, calib);
    table.add_row({sc.axis, format_double(v), format_double(delta),
                   format_double(displacement), format_double(rd.p_fine),
                   format_double(rd.p_coarse), format_double(rd.epsilon),
                   format_double(rd.pair_sum), fmt_bool(rd.cross_checked),
                   format_double(est.p_est), format_double(est.eps_est)});
    rows.push_back({{"axis", sc.axis},
                    {"value", v},
                    {"delta", delta},
                    {"displacement", displacement},
                    {"p_fine", rd.p_fine},
                    {"p_coarse", rd.p_coarse},
                    {"epsilon", rd.epsilon},
                    {"pair_sum", rd.pair_sum},
                    {"cross_checked", rd.cross_checked},
                    {"p_estimate", est.p_est},
                    {"eps_estimate", est.eps_est}});
    displacements.push_back(displacement);
    epsilons.push_back(rd.epsilon);
  }
  emit(ctx, table);

  // Oscillation period from the zero crossings of epsilon(displacement).
  json period = nullptr;
  if (sc.axis == "shift") {
    std::vector<double> crossings;
    for (std::size_t k = 1; k < epsilons.size(); ++k) {
      if (epsilons[k - 1] * epsilons[k] < 0.0) {
        const double f = epsilons[k - 1] / (epsilons[k - 1] - epsilons[k]);
        crossings.push_back(displacements[k - 1] +
                            f * (displacements[k] - displacements[k - 1]));
      }
    }
    if (crossings.size() >= 2) {
      const double measured =
          2.0 * (crossings.back() - crossings.front()) / (crossings.size() - 1);
      period = {{"crossings", static_cast<std::int64_t>(crossings.size())},
                {"measured", measured},
                {"closed_form", oscillation_period(ex)}};
    }
  }

  const DerivedParams dp = derived_params(ex);
  note(ctx, "epsilon-scan: " + std::to_string(table.rows()) + " points on axis \"" +
                sc.axis + "\" (r = " + format_double(dp.r) + ")");
  return json{{"rows", std::move(rows)},
              {"params", {{"r", dp.r}, {"a", dp.a}, {"b", dp.b}, {"c", dp.c}}},
              {"calibration", std::move(calibration)},
              {"integral_form", std::move(integral_form)},
              {"period", std::move(period)}};
}

json run_gaussian_analytic(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  if (!cfg.analytic) {
    throw InvalidArgument("config", "analytic", "gaussian-analytic requires an analytic block");
  }
  if (cfg.device.kind != OperatorKind::GaussianSmeared) {
    throw InvalidArgument("config", "device.kind",
                          "the closed forms model smeared devices; set kind to \"smeared\"");
  }
  const AnalyticConfig& ac = *cfg.analytic;
  const GaussianExample ex = make_example(cfg);
  const DerivedParams dp = derived_params(ex);
  const TwoTimeEngine engine(make_spec(cfg));

  CsvTable params({"sigma[L]", "p[1/L]", "mass[M]", "delta[L]", "lag[T]", "r", "a", "b",
                   "c", "regime_valid", "oscillation_period[L]"});
  params.add_row({format_double(ex.sigma), format_double(ex.p), format_double(ex.m),
                  format_double(ex.delta), format_double(ex.t), format_double(dp.r),
                  format_double(dp.a), format_double(dp.b), format_double(dp.c),
                  fmt_bool(ex.regime_valid()), format_double(oscillation_period(ex))});
  if (ctx.write_csv) params.write(table_path(ctx, ".params"));

  const double x1 = ac.x1;
  const double x2_base = x1 + (ex.p / ex.m) * ex.t;
  const double delta = ex.delta;

  CsvTable table({"displacement[L]", "x2[L]", "numeric_p", "closed_p", "p_ratio",
                  "numeric_re_d", "numeric_im_d", "closed_re_d", "closed_im_d",
                  "modulus_ratio"});
  json rows = json::array();
  // Least-squares accumulators for ln(p) against displacement^2.
  double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
  int n_fit = 0;
  double prefactor_ratio = 0.0, modulus_dev = 0.0;
  for (double D = ac.shift_from; D <= ac.shift_to + 0.5 * ac.shift_step;
       D += ac.shift_step) {
    const double x2 = x2_base + D;
    const double num_p = engine.point_probability(x1, x2);
    const double cls_p = closed_form_point_probability(ex, x1, x2);
    const std::complex<double> num_d =
        engine.point_interference(x1 + delta / 2.0, x1 - delta / 2.0, x2);
    const std::complex<double> cls_d = closed_form_interference(ex, x1, x2);
    const double modulus_ratio = num_p > 0.0 ? std::abs(num_d) / num_p : 0.0;
    table.add_row({format_double(D), format_double(x2), format_double(num_p),
                   format_double(cls_p), format_double(cls_p > 0.0 ? num_p / cls_p : 0.0),
                   format_double(num_d.real()), format_double(num_d.imag()),
                   format_double(cls_d.real()), format_double(cls_d.imag()),
                   format_double(modulus_ratio)});
    rows.push_back({{"displacement", D},
                    {"x2", x2},
                    {"numeric_p", num_p},
                    {"closed_p", cls_p},
                    {"numeric_d", {num_d.real(), num_d.imag()}},
                    {"closed_d", {cls_d.real(), cls_d.imag()}},
                    {"modulus_ratio", modulus_ratio}});
    if (num_p > 0.0) {
      const double X = D * D, Y = std::log(num_p);
      sxx += X * X;
      sxy += X * Y;
      sx += X;
      sy += Y;
      ++n_fit;
    }
    if (std::abs(D) < 0.25 * ac.shift_step) {
      prefactor_ratio = cls_p > 0.0 ? num_p / cls_p : 0.0;
      modulus_dev = std::abs(modulus_ratio - std::exp(-dp.c)) / std::exp(-dp.c);
    }
  }
  emit(ctx, table);

  json fit = nullptr;
  if (n_fit >= 3) {
    const double slope = (n_fit * sxy - sx * sy) / (n_fit * sxx - sx * sx);
    const double target = -dp.a / (4.0 * delta * delta);
    fit = {{"exponent_slope", slope},
           {"exponent_target", target},
           {"exponent_deviation", std::abs(slope - target) / std::abs(target)}};
  }
  note(ctx, "gaussian-analytic: r = " + format_double(dp.r) + ", " +
                std::to_string(table.rows()) + " displacement points");
  return json{{"rows", std::move(rows)},
              {"params",
               {{"r", dp.r},
                {"a", dp.a},
                {"b", dp.b},
                {"c", dp.c},
                {"regime_valid", ex.regime_valid()},
                {"oscillation_period", oscillation_period(ex)}}},
              {"fit", std::move(fit)},
              {"prefactor_ratio", prefactor_ratio},
              {"modulus_deviation_at_zero", modulus_dev}};
}

json run_consistency_scan(const RunContext& ctx) {
  const TwoTimeSpec spec = make_spec(ctx.config);
  const TwoTimeEngine engine(spec);
  const double tolerance = 1e-3;
  const std::vector<DecoherenceReport> reports = engine.consistency_scan(tolerance);

  CsvTable table({"first_set_a", "first_set_b", "second_set", "re_d", "im_d", "defect",
                  "p_a", "p_b", "consistent"});
  json rows = json::array();
  for (const auto& rep : reports) {
    table.add_row({spec.first.set(rep.a).name, spec.first.set(rep.b).name,
                   spec.second.set(rep.j).name, format_double(rep.d.real()),
                   format_double(rep.d.imag()), format_double(rep.defect),
                   format_double(rep.p_a), format_double(rep.p_b),
                   fmt_bool(rep.consistent)});
    rows.push_back({{"first_set_a", spec.first.set(rep.a).name},
                    {"first_set_b", spec.first.set(rep.b).name},
                    {"second_set", spec.second.set(rep.j).name},
                    {"d", {rep.d.real(), rep.d.imag()}},
                    {"defect", rep.defect},
                    {"p_a", rep.p_a},
                    {"p_b", rep.p_b},
                    {"consistent", rep.consistent}});
  }
  emit(ctx, table);
  const bool all = TwoTimeEngine::all_consistent(reports);
  note(ctx, std::string("consistency-scan: ") + (all ? "all pairs consistent" : "interference present") +
                " (" + std::to_string(table.rows()) + " pairs, tolerance " +
                format_double(tolerance) + ")");
  return json{{"rows", std::move(rows)},
              {"tolerance", tolerance},
              {"all_consistent", all}};
}

json run_frequency(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  if (cfg.device.kind != OperatorKind::SharpInterval) {
    throw InvalidArgument("config", "device.kind",
                          "trial sampling realizes projective collapse; set kind to \"sharp\"");
  }
  const TwoTimeSpec spec = make_spec(cfg);
  const TwoTimeEngine engine(spec);
  const TrialSampler sampler(spec, DeviceModel::full_recorder(cfg.device.delta),
                             DeviceModel::full_recorder(cfg.device.delta));
  const std::vector<TrialOutcome> outcomes =
      run_trials(sampler, cfg.run.trials, cfg.run.seed, cfg.run.threads);
  const std::vector<TrialRecord> records = to_records(sampler, outcomes);
  const FrequencyTable table =
      accumulate(records, sampler.first_centers(), sampler.second_centers());
  table.assert_axioms();
  const auto n = static_cast<std::int64_t>(records.size());

  // Cell-level table and goodness of fit against the model joint law.
  const std::vector<std::vector<double>> model = sampler.joint_model();
  const int n1 = static_cast<int>(sampler.first_centers().size());
  const int n2 = static_cast<int>(sampler.second_centers().size());
  CsvTable cells({"x1[L]", "x2[L]", "count", "frequency", "model_probability"});
  std::vector<std::int64_t> observed;
  std::vector<double> probabilities;
  observed.reserve(static_cast<std::size_t>(n1) * n2);
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n2; ++b) {
      const std::int64_t c = table.count(a, b);
      observed.push_back(c);
      probabilities.push_back(model[a][b]);
      cells.add_row({format_double(sampler.first_centers()[a]),
                     format_double(sampler.second_centers()[b]), format_int(c),
                     format_double(n > 0 ? static_cast<double>(c) / n : 0.0),
                     format_double(model[a][b])});
    }
  }
  if (ctx.write_csv) cells.write(table_path(ctx, ".cells"));
  const ChiSquareResult gof = chi_square_gof(observed, probabilities);

  // Coarse-set comparison of the empirical rates against both rules.
  const std::vector<RuleComparisonRow> compare = compare_rules(table, engine);
  CsvTable main({"first_set", "second_set", "empirical", "contextual", "standard",
                 "defect", "z_contextual", "z_standard", "trials"});
  json compare_rows = json::array();
  for (const auto& row : compare) {
    main.add_row({row.first_set, row.second_set, format_double(row.empirical),
                  format_double(row.contextual), format_double(row.standard),
                  format_double(row.defect), format_double(row.z_contextual),
                  format_double(row.z_standard), format_int(row.trials)});
    compare_rows.push_back({{"first_set", row.first_set},
                            {"second_set", row.second_set},
                            {"empirical", row.empirical},
                            {"contextual", row.contextual},
                            {"standard", row.standard},
                            {"defect", row.defect},
                            {"z_contextual", row.z_contextual},
                            {"z_standard", row.z_standard},
                            {"trials", row.trials}});
  }
  emit(ctx, main);

  // Frequency trajectories along the checkpoint schedule.
  const std::vector<std::int64_t> checkpoints =
      cfg.run.checkpoints.empty() ? default_checkpoints(n) : cfg.run.checkpoints;
  CsvTable conv({"first_set", "second_set", "checkpoint", "frequency"});
  json convergence = json::array();
  for (int i = 0; i < spec.first.set_count(); ++i) {
    for (int j = 0; j < spec.second.set_count(); ++j) {
      const std::vector<std::uint8_t> hits =
          membership_sequence(records, spec.first.set(i), spec.second.set(j));
      const ConvergenceReport rep = convergence_report(hits, checkpoints);
      for (std::size_t k = 0; k < rep.checkpoints.size(); ++k) {
        conv.add_row({spec.first.set(i).name, spec.second.set(j).name,
                      format_int(rep.checkpoints[k]), format_double(rep.trajectory[k])});
      }
      convergence.push_back({{"first_set", spec.first.set(i).name},
                             {"second_set", spec.second.set(j).name},
                             {"checkpoints", rep.checkpoints},
                             {"trajectory", rep.trajectory},
                             {"oscillation", rep.oscillation},
                             {"half_width", rep.half_width},
                             {"verdict", verdict_name(rep.verdict)}});
    }
  }
  if (ctx.write_csv) conv.write(table_path(ctx, ".convergence"));

  note(ctx, "frequency: " + std::to_string(n) + " trials, chi-square p = " +
                format_double(gof.p_value));
  return json{{"trials", n},
              {"chi_square",
               {{"chi2", gof.chi2},
                {"dof", gof.dof},
                {"p_value", gof.p_value},
                {"bins_used", gof.bins_used},
                {"bins_pooled", gof.bins_pooled}}},
              {"compare", std::move(compare_rows)},
              {"convergence", std::move(convergence)}};
}

json run_filter_vs_device(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  if (cfg.device.kind != OperatorKind::SharpInterval) {
    throw InvalidArgument("config", "device.kind",
                          "trial sampling realizes projective collapse; set kind to \"sharp\"");
  }
  const TwoTimeSpec spec = make_spec(cfg);
  const std::string first_name = cfg.select ? cfg.select->first_set : std::string();
  const std::string second_name = cfg.select ? cfg.select->second_set : std::string();
  const int i = set_index_or_fail(spec.first, first_name, "select.first_set");
  const int j = set_index_or_fail(spec.second, second_name, "select.second_set");

  const FilterVsDeviceReport rep =
      filter_vs_device(spec, i, j, cfg.run.trials, cfg.run.seed, cfg.run.threads);

  CsvTable table({"first_set", "second_set", "filter_rate", "recorder_rate",
                  "standard_prediction", "contextual_prediction", "difference_empirical",
                  "difference_predicted", "z_filter_vs_standard",
                  "z_recorder_vs_contextual", "z_difference", "trials"});
  table.add_row({spec.first.set(i).name, spec.second.set(j).name,
                 format_double(rep.filter_rate), format_double(rep.recorder_rate),
                 format_double(rep.standard_prediction),
                 format_double(rep.contextual_prediction),
                 format_double(rep.difference_empirical),
                 format_double(rep.difference_predicted),
                 format_double(rep.z_filter_vs_standard),
                 format_double(rep.z_recorder_vs_contextual),
                 format_double(rep.z_difference), format_int(rep.trials)});
  emit(ctx, table);

  note(ctx, "filter-vs-device: filter " + format_double(rep.filter_rate) + " vs recorder " +
                format_double(rep.recorder_rate) + " (predicted difference " +
                format_double(rep.difference_predicted) + ")");
  return json{{"first_set", spec.first.set(i).name},
              {"second_set", spec.second.set(j).name},
              {"filter_rate", rep.filter_rate},
              {"recorder_rate", rep.recorder_rate},
              {"standard_prediction", rep.standard_prediction},
              {"contextual_prediction", rep.contextual_prediction},
              {"difference_empirical", rep.difference_empirical},
              {"difference_predicted", rep.difference_predicted},
              {"z_filter_vs_standard", rep.z_filter_vs_standard},
              {"z_recorder_vs_contextual", rep.z_recorder_vs_contextual},
              {"z_difference", rep.z_difference},
              {"trials", rep.trials}};
}

}  // namespace twotime::cli
