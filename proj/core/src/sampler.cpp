#include "twotime/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"
#include "twotime/rng.hpp"
#include "twotime/stats.hpp"

namespace twotime {

namespace {

constexpr double kZeroWeight = 1e-300;

// Index of the outcome whose cumulative bracket contains v; the
// round-off sliver above the final cumulative value falls to the last
// outcome, so a draw can never fail.
int scan_cdf(const std::vector<double>& cdf, double v) {
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (v < cdf[i]) return static_cast<int>(i);
  }
  return static_cast<int>(cdf.size()) - 1;
}

std::vector<double> recorder_centers(const PositionGrid& grid, double delta) {
  const double width = grid.width();
  const double cells = width / delta;
  const double rounded = std::round(cells);
  if (!(std::abs(cells - rounded) <= 1e-9 * cells) || rounded < 1.0) {
    throw AlignmentError("frequency_lab", "DeviceModel.delta",
                         "recorder resolution must tile the grid width exactly");
  }
  std::vector<double> centers(static_cast<std::size_t>(rounded));
  for (std::size_t c = 0; c < centers.size(); ++c) {
    centers[c] = grid.x_min + (static_cast<double>(c) + 0.5) * delta;
  }
  return centers;
}

}  // namespace

DeviceModel DeviceModel::full_recorder(double delta) {
  DeviceModel d;
  d.kind = Kind::FullRecorder;
  d.delta = delta;
  return d;
}

DeviceModel DeviceModel::slit_filter(SampleSet pass_set) {
  DeviceModel d;
  d.kind = Kind::SlitFilter;
  d.slit = std::move(pass_set);
  return d;
}

TrialSampler::TrialSampler(TwoTimeSpec spec, DeviceModel first_device,
                           DeviceModel second_device)
    : spec_(std::move(spec)),
      first_device_(std::move(first_device)),
      second_device_(std::move(second_device)) {
  spec_.validate();
  if (spec_.kind != OperatorKind::SharpInterval) {
    throw InvalidArgument("frequency_lab", "TrialSampler",
                          "the collapse chain samples sharp projectors only");
  }
  const PositionGrid& grid = spec_.grid();
  FreeEvolver evolver(grid, spec_.mass);

  // State at the first measurement (user-level step: guarded).
  const std::variant<PureState, DensityMatrix> at_t1 =
      spec_.t1 == 0.0 ? spec_.initial
                      : std::visit(
                            [&](const auto& s) -> std::variant<PureState, DensityMatrix> {
                              return evolver.apply(s, spec_.t1);
                            },
                            spec_.initial);
  const bool pure = std::holds_alternative<PureState>(at_t1);
  const double dt = spec_.t2 - spec_.t1;

  // First-stage operators: one per recorder cell, or the single merged
  // indicator of a slit.
  std::vector<MeasurementOperator> first_ops;
  if (first_device_.kind == DeviceModel::Kind::FullRecorder) {
    first_centers_ = recorder_centers(grid, first_device_.delta);
    first_ops.reserve(first_centers_.size());
    for (double c : first_centers_) {
      first_ops.push_back(make_measurement_operator(grid, OperatorKind::SharpInterval, c,
                                                    first_device_.delta));
    }
  } else {
    first_ops.push_back(set_indicator(grid, first_device_.slit));
  }

  std::vector<MeasurementOperator> second_ops;
  if (second_device_.kind == DeviceModel::Kind::FullRecorder) {
    second_centers_ = recorder_centers(grid, second_device_.delta);
    second_ops.reserve(second_centers_.size());
    for (double c : second_centers_) {
      second_ops.push_back(make_measurement_operator(grid, OperatorKind::SharpInterval, c,
                                                     second_device_.delta));
    }
  } else {
    second_ops.push_back(set_indicator(grid, second_device_.slit));
  }

  // Branch per first-stage outcome: Born weight, then the conditional
  // second-stage law of the collapsed-and-evolved state. Post-collapse
  // propagation is chain-internal: the sharp edges diffract, and those
  // tails are part of the model being sampled, not an error.
  branches_.resize(first_ops.size());
  first_cdf_.resize(first_ops.size());
  NeumaierSum first_sum;
  for (std::size_t a = 0; a < first_ops.size(); ++a) {
    Branch& branch = branches_[a];
    branch.weight = std::visit([&](const auto& s) { return first_ops[a].weight(s); }, at_t1);
    first_sum.add(branch.weight);
    first_cdf_[a] = first_sum.value();
    if (branch.weight <= kZeroWeight) continue;  // never drawn, nothing to prepare

    branch.second_cdf.resize(second_ops.size());
    NeumaierSum row;
    if (pure) {
      const auto& psi = std::get<PureState>(at_t1);
      Eigen::VectorXcd phi = first_ops[a].apply(psi);
      evolver.apply_raw(phi, dt);
      for (std::size_t b = 0; b < second_ops.size(); ++b) {
        const Eigen::VectorXd& diag = second_ops[b].diagonal();
        NeumaierSum w;
        for (int k = 0; k < phi.size(); ++k) {
          if (diag[k] != 0.0) w.add(sq(diag[k]) * std::norm(phi[k]));
        }
        row.add(w.value() * grid.dx);
        branch.second_cdf[b] = row.value();
      }
    } else {
      const auto& rho = std::get<DensityMatrix>(at_t1).elements();
      const Eigen::VectorXd& d1 = first_ops[a].diagonal();
      const int n = grid.n_points;
      Eigen::MatrixXcd kernel(n, n);
      for (int l = 0; l < n; ++l) {
        for (int k = 0; k < n; ++k) kernel(k, l) = d1[k] * rho(k, l) * d1[l];
      }
      evolver.apply_raw(kernel, dt);
      for (std::size_t b = 0; b < second_ops.size(); ++b) {
        const Eigen::VectorXd& diag = second_ops[b].diagonal();
        NeumaierSum w;
        for (int k = 0; k < n; ++k) {
          if (diag[k] != 0.0) w.add(sq(diag[k]) * kernel(k, k).real());
        }
        row.add(std::max(w.value() * grid.dx, 0.0));
        branch.second_cdf[b] = row.value();
      }
    }
    branch.second_total = row.value();
  }
  first_total_ = first_sum.value();
  if (first_total_ <= kZeroWeight) {
    throw ZeroWeightOutcome("frequency_lab", "TrialSampler",
                            "first measurement has no probability anywhere");
  }
}

TrialOutcome TrialSampler::sample(std::uint64_t master_seed,
                                  std::uint64_t trial_index) const {
  SplitMix64 rng = trial_stream(master_seed, trial_index);
  TrialOutcome out;

  const double u1 = rng.next_double();
  int a;
  if (first_device_.kind == DeviceModel::Kind::SlitFilter) {
    // Pass probability is the literal Born weight of the slit set;
    // everything else is absorbed.
    if (u1 >= branches_[0].weight) return out;  // blocked at stage one
    out.first = kPassed;
    a = 0;
  } else {
    a = scan_cdf(first_cdf_, u1 * first_total_);
    // The final round-off sliver of the cumulative scale can land on a
    // zero-weight tail cell; step back to the nearest drawable outcome.
    while (a > 0 && branches_[static_cast<std::size_t>(a)].weight <= kZeroWeight) --a;
    out.first = a;
  }

  const Branch& branch = branches_[static_cast<std::size_t>(a)];
  if (branch.second_total <= kZeroWeight) {
    throw ZeroWeightOutcome("frequency_lab", "TrialSampler.sample",
                            "drew a first outcome with an empty conditional law");
  }
  const double u2 = rng.next_double();
  if (second_device_.kind == DeviceModel::Kind::SlitFilter) {
    // Slit weight of the evolved piece over the piece's own norm: the
    // Born pass probability of the collapsed state.
    const double pass = branch.second_cdf[0] / branch.weight;
    if (u2 < pass) out.second = kPassed;
    return out;
  }
  out.second = scan_cdf(branch.second_cdf, u2 * branch.second_total);
  return out;
}

std::vector<std::vector<double>> TrialSampler::joint_model() const {
  std::vector<std::vector<double>> joint(branches_.size());
  for (std::size_t a = 0; a < branches_.size(); ++a) {
    const Branch& branch = branches_[a];
    joint[a].assign(branch.second_cdf.size(), 0.0);
    double prev = 0.0;
    for (std::size_t b = 0; b < branch.second_cdf.size(); ++b) {
      joint[a][b] = branch.second_cdf[b] - prev;
      prev = branch.second_cdf[b];
    }
  }
  return joint;
}

std::vector<TrialOutcome> run_trials(const TrialSampler& sampler, std::int64_t n,
                                     std::uint64_t master_seed, int threads) {
  if (n < 0) throw InvalidArgument("frequency_lab", "run_trials", "negative trial count");
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n));
  const auto worker = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t k = lo; k < hi; ++k) {
      outcomes[static_cast<std::size_t>(k)] =
          sampler.sample(master_seed, static_cast<std::uint64_t>(k));
    }
  };
  if (threads <= 1 || n < 2) {
    worker(0, n);
    return outcomes;
  }
  const int t = std::min<std::int64_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  const std::int64_t chunk = (n + t - 1) / t;
  for (int w = 0; w < t; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n);
    if (lo >= hi) break;
    pool.emplace_back(worker, lo, hi);
  }
  for (std::thread& th : pool) th.join();
  return outcomes;
}

std::vector<TrialRecord> to_records(const TrialSampler& sampler,
                                    const std::vector<TrialOutcome>& outcomes) {
  std::vector<TrialRecord> records;
  records.reserve(outcomes.size());
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const TrialOutcome& o = outcomes[k];
    if (o.first < 0 || o.second < 0) continue;
    if (sampler.first_centers().empty() || sampler.second_centers().empty()) {
      continue;  // filter outcomes carry no position record
    }
    TrialRecord r;
    r.index = static_cast<std::int64_t>(k);
    r.x1 = sampler.first_centers()[static_cast<std::size_t>(o.first)];
    r.x2 = sampler.second_centers()[static_cast<std::size_t>(o.second)];
    records.push_back(r);
  }
  return records;
}

std::vector<RuleComparisonRow> compare_rules(const FrequencyTable& table,
                                             const TwoTimeEngine& engine) {
  std::vector<RuleComparisonRow> rows;
  const TwoTimeSpec& spec = engine.spec();
  const std::int64_t n = table.total();
  for (int i = 0; i < spec.first.set_count(); ++i) {
    for (int j = 0; j < spec.second.set_count(); ++j) {
      RuleComparisonRow row;
      row.first_set = spec.first.set(i).name;
      row.second_set = spec.second.set(j).name;
      row.trials = n;
      row.empirical =
          static_cast<double>(table.count_in(spec.first.set(i), spec.second.set(j))) /
          static_cast<double>(n);
      row.contextual = engine.contextual_two_time(i, j);
      row.standard = engine.standard_two_time(i, j);
      row.defect = row.standard - row.contextual;
      row.z_contextual = z_score(row.empirical, row.contextual, n);
      row.z_standard = z_score(row.empirical, row.standard, n);
      rows.push_back(row);
    }
  }
  return rows;
}

FilterVsDeviceReport filter_vs_device(const TwoTimeSpec& spec, int first_set,
                                      int second_set, std::int64_t trials,
                                      std::uint64_t master_seed, int threads) {
  if (trials <= 0) {
    throw InvalidArgument("frequency_lab", "filter_vs_device", "need a positive trial count");
  }
  const SampleSet& u1 = spec.first.set(first_set);
  const SampleSet& u2 = spec.second.set(second_set);

  // Independent sub-seeds for the two experiment designs.
  SplitMix64 seeder(master_seed);
  const std::uint64_t filter_seed = seeder.next_u64();
  const std::uint64_t recorder_seed = seeder.next_u64();

  FilterVsDeviceReport report;
  report.trials = trials;

  {
    TrialSampler filter_sampler(spec, DeviceModel::slit_filter(u1),
                                DeviceModel::slit_filter(u2));
    const std::vector<TrialOutcome> outcomes =
        run_trials(filter_sampler, trials, filter_seed, threads);
    std::int64_t pass_pass = 0;
    for (const TrialOutcome& o : outcomes) {
      if (o.first == kPassed && o.second == kPassed) ++pass_pass;
    }
    // Blocked trials stay in the denominator: the pass rate refers to
    // everything the source emitted.
    report.filter_rate = static_cast<double>(pass_pass) / static_cast<double>(trials);
  }

  {
    TrialSampler recorder_sampler(spec,
                                  DeviceModel::full_recorder(spec.first.delta()),
                                  DeviceModel::full_recorder(spec.second.delta()));
    const std::vector<TrialOutcome> outcomes =
        run_trials(recorder_sampler, trials, recorder_seed, threads);
    std::int64_t in_sets = 0;
    for (const TrialOutcome& o : outcomes) {
      if (o.first < 0 || o.second < 0) continue;
      const double x1 = recorder_sampler.first_centers()[static_cast<std::size_t>(o.first)];
      const double x2 =
          recorder_sampler.second_centers()[static_cast<std::size_t>(o.second)];
      if (set_contains(u1, x1) && set_contains(u2, x2)) ++in_sets;
    }
    report.recorder_rate = static_cast<double>(in_sets) / static_cast<double>(trials);
  }

  TwoTimeEngine engine(spec);
  report.standard_prediction = engine.standard_two_time(first_set, second_set);
  report.contextual_prediction = engine.contextual_two_time(first_set, second_set);
  report.difference_empirical = report.filter_rate - report.recorder_rate;
  report.difference_predicted = report.standard_prediction - report.contextual_prediction;
  report.z_filter_vs_standard =
      z_score(report.filter_rate, report.standard_prediction, trials);
  report.z_recorder_vs_contextual =
      z_score(report.recorder_rate, report.contextual_prediction, trials);

  const double var_f = report.standard_prediction * (1.0 - report.standard_prediction);
  const double var_r =
      report.contextual_prediction * (1.0 - report.contextual_prediction);
  const double se_diff = std::sqrt((var_f + var_r) / static_cast<double>(trials));
  report.z_difference =
      se_diff > 0.0
          ? (report.difference_empirical - report.difference_predicted) / se_diff
          : 0.0;
  return report;
}

}  // namespace twotime
