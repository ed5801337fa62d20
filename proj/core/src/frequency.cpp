#include "twotime/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "twotime/errors.hpp"
#include "twotime/rng.hpp"
#include "twotime/stats.hpp"

namespace twotime {

namespace {

double min_spacing(const std::vector<double>& centers) {
  if (centers.size() < 2) return std::numeric_limits<double>::infinity();
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < centers.size(); ++i) {
    spacing = std::min(spacing, centers[i] - centers[i - 1]);
  }
  return spacing;
}

}  // namespace

FrequencyTable::FrequencyTable(std::vector<double> first_centers,
                               std::vector<double> second_centers)
    : first_centers_(std::move(first_centers)), second_centers_(std::move(second_centers)) {
  if (first_centers_.empty() || second_centers_.empty()) {
    throw InvalidArgument("frequency_lab", "FrequencyTable", "empty center list");
  }
  if (!std::is_sorted(first_centers_.begin(), first_centers_.end()) ||
      !std::is_sorted(second_centers_.begin(), second_centers_.end())) {
    throw InvalidArgument("frequency_lab", "FrequencyTable",
                          "center lists must be sorted ascending");
  }
  first_spacing_ = min_spacing(first_centers_);
  second_spacing_ = min_spacing(second_centers_);
  counts_.assign(first_centers_.size() * second_centers_.size(), 0);
}

int FrequencyTable::locate(const std::vector<double>& centers, double spacing_floor,
                           double x, const char* which) const {
  const auto it = std::lower_bound(centers.begin(), centers.end(), x);
  int best = static_cast<int>(it - centers.begin());
  if (best == static_cast<int>(centers.size())) {
    --best;
  } else if (best > 0 &&
             std::abs(centers[best - 1] - x) < std::abs(centers[best] - x)) {
    --best;
  }
  // A genuine device outcome IS one of the centers; anything farther than
  // a small fraction of the cell spacing was produced against a different
  // partition.
  const double tolerance = 0.25 * spacing_floor;
  if (!(std::abs(centers[best] - x) <= tolerance)) {
    throw PartitionMismatch("frequency_lab", "FrequencyTable.add",
                            std::string(which) + " outcome " + std::to_string(x) +
                                " is not a cell center of this table");
  }
  return best;
}

void FrequencyTable::add(const TrialRecord& record) {
  const int i = locate(first_centers_, first_spacing_, record.x1, "first-time");
  const int j = locate(second_centers_, second_spacing_, record.x2, "second-time");
  ++counts_[static_cast<std::size_t>(i) * second_centers_.size() + j];
  ++total_;
}

std::int64_t FrequencyTable::count(int i, int j) const {
  return counts_.at(static_cast<std::size_t>(i) * second_centers_.size() + j);
}

std::int64_t FrequencyTable::first_marginal(int i) const {
  std::int64_t n = 0;
  for (std::size_t j = 0; j < second_centers_.size(); ++j) {
    n += counts_[static_cast<std::size_t>(i) * second_centers_.size() + j];
  }
  return n;
}

std::int64_t FrequencyTable::second_marginal(int j) const {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < first_centers_.size(); ++i) {
    n += counts_[i * second_centers_.size() + j];
  }
  return n;
}

std::int64_t FrequencyTable::count_in(const SampleSet& first_set,
                                      const SampleSet& second_set) const {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < first_centers_.size(); ++i) {
    if (!set_contains(first_set, first_centers_[i])) continue;
    for (std::size_t j = 0; j < second_centers_.size(); ++j) {
      if (set_contains(second_set, second_centers_[j])) {
        n += counts_[i * second_centers_.size() + j];
      }
    }
  }
  return n;
}

std::int64_t FrequencyTable::count_first_in(const SampleSet& first_set) const {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < first_centers_.size(); ++i) {
    if (set_contains(first_set, first_centers_[i])) n += first_marginal(static_cast<int>(i));
  }
  return n;
}

void FrequencyTable::assert_axioms() const {
  std::int64_t sum = 0;
  for (std::int64_t c : counts_) sum += c;
  if (sum != total_) {
    throw InternalInconsistency("frequency_lab", "FrequencyTable",
                                "cell counts sum to " + std::to_string(sum) +
                                    " but " + std::to_string(total_) +
                                    " records were added");
  }
}

FrequencyTable accumulate(const std::vector<TrialRecord>& records,
                          std::vector<double> first_centers,
                          std::vector<double> second_centers) {
  FrequencyTable table(std::move(first_centers), std::move(second_centers));
  for (const TrialRecord& r : records) table.add(r);
  table.assert_axioms();
  return table;
}

std::vector<std::int64_t> default_checkpoints(std::int64_t n) {
  std::vector<std::int64_t> cps;
  for (std::int64_t c = 64; c <= n; c *= 2) cps.push_back(c);
  if (cps.empty() || cps.back() != n) cps.push_back(n);
  return cps;
}

ConvergenceReport convergence_report(const std::vector<std::uint8_t>& hits,
                                     const std::vector<std::int64_t>& checkpoints) {
  if (checkpoints.size() < 4) {
    throw InsufficientData("frequency_lab", "convergence_report",
                           "need at least 4 checkpoints, got " +
                               std::to_string(checkpoints.size()));
  }
  const std::int64_t n = static_cast<std::int64_t>(hits.size());
  std::int64_t prev = 0;
  for (std::int64_t c : checkpoints) {
    if (c <= prev || c > n) {
      throw InvalidArgument("frequency_lab", "convergence_report",
                            "checkpoints must increase and stay within the stream");
    }
    prev = c;
  }

  ConvergenceReport report;
  report.checkpoints = checkpoints;
  report.trajectory.reserve(checkpoints.size());
  std::int64_t running = 0;
  std::int64_t at = 0;
  for (std::int64_t c : checkpoints) {
    for (; at < c; ++at) running += hits[static_cast<std::size_t>(at)];
    report.trajectory.push_back(static_cast<double>(running) / static_cast<double>(c));
  }

  // Tail of three checkpoints: enough to catch block-wise see-sawing, few
  // enough that early-N transients don't count against convergence.
  const std::size_t tail = 3;
  const std::size_t start = report.trajectory.size() - tail;
  double osc = 0.0;
  for (std::size_t i = start; i < report.trajectory.size(); ++i) {
    for (std::size_t j = i + 1; j < report.trajectory.size(); ++j) {
      osc = std::max(osc, std::abs(report.trajectory[i] - report.trajectory[j]));
    }
  }
  report.oscillation = osc;
  report.half_width = binomial_half_width(report.trajectory.back(), checkpoints.back());
  report.verdict = osc <= 4.0 * report.half_width ? Verdict::Converged
                                                  : Verdict::Inconclusive;
  return report;
}

ConvergenceReport stream_convergence(const std::vector<std::uint8_t>& hits) {
  return convergence_report(hits, default_checkpoints(static_cast<std::int64_t>(hits.size())));
}

std::vector<std::uint8_t> membership_sequence(const std::vector<TrialRecord>& records,
                                              const SampleSet& first_set,
                                              const SampleSet& second_set) {
  std::vector<std::uint8_t> hits;
  hits.reserve(records.size());
  for (const TrialRecord& r : records) {
    hits.push_back(set_contains(first_set, r.x1) && set_contains(second_set, r.x2) ? 1 : 0);
  }
  return hits;
}

std::vector<std::uint8_t> bernoulli_stream(double q, std::int64_t n, std::uint64_t seed) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InvalidArgument("frequency_lab", "bernoulli_stream", "q must lie in [0, 1]");
  }
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    hits[static_cast<std::size_t>(k)] =
        trial_stream(seed, static_cast<std::uint64_t>(k)).next_double() < q ? 1 : 0;
  }
  return hits;
}

std::vector<std::uint8_t> block_oscillation_stream(std::int64_t n) {
  // Trial k belongs to block floor(log2(k+1)); block sizes 1, 2, 4, ...
  // Even blocks hit, odd blocks miss: the prefix frequency see-saws
  // between ~2/3 (after an even block) and ~1/3 (after an odd one).
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(n));
  int block = 0;
  std::int64_t next_boundary = 1;  // first index of the next block
  for (std::int64_t k = 0; k < n; ++k) {
    if (k + 1 >= next_boundary * 2) {
      ++block;
      next_boundary *= 2;
    }
    hits[static_cast<std::size_t>(k)] = block % 2 == 0 ? 1 : 0;
  }
  return hits;
}

std::vector<std::uint8_t> interference_leak_stream(double q, double gain, double re_d,
                                                   std::int64_t n, std::uint64_t seed) {
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(n));
  int block = 0;
  std::int64_t next_boundary = 1;
  for (std::int64_t k = 0; k < n; ++k) {
    if (k + 1 >= next_boundary * 2) {
      ++block;
      next_boundary *= 2;
    }
    const double sign = block % 2 == 0 ? 1.0 : -1.0;
    const double biased = std::clamp(q + sign * gain * re_d, 0.0, 1.0);
    hits[static_cast<std::size_t>(k)] =
        trial_stream(seed, static_cast<std::uint64_t>(k)).next_double() < biased ? 1 : 0;
  }
  return hits;
}

}  // namespace twotime
