#pragma once

#include <cstdint>
#include <vector>

#include "twotime/partition.hpp"

namespace twotime {

// One completed two-time trial: the cell centers the device registered
// at the two times.
struct TrialRecord {
  std::int64_t index = 0;
  double x1 = 0.0;
  double x2 = 0.0;
};

// Joint counting function over a pair of device-cell tilings: counts
// n(cell_i, cell_j) of trials registering center i at the first time and
// center j at the second. The counting axioms — monotone growth in N,
// exact additivity over disjoint unions, n(everything) = N, n(empty) = 0
// — hold by integer counting; assert_axioms re-checks the total.
class FrequencyTable {
public:
  FrequencyTable(std::vector<double> first_centers, std::vector<double> second_centers);

  void add(const TrialRecord& record);  // PartitionMismatch if off-lattice

  const std::vector<double>& first_centers() const { return first_centers_; }
  const std::vector<double>& second_centers() const { return second_centers_; }
  std::int64_t total() const { return total_; }

  std::int64_t count(int i, int j) const;
  std::int64_t first_marginal(int i) const;
  std::int64_t second_marginal(int j) const;

  // Set-level counts: sum over cells whose center lies in the set(s).
  // Exactly additive over disjoint sets by construction.
  std::int64_t count_in(const SampleSet& first_set, const SampleSet& second_set) const;
  std::int64_t count_first_in(const SampleSet& first_set) const;

  // Re-assert n(everything) = N. InternalInconsistency on failure.
  void assert_axioms() const;

private:
  int locate(const std::vector<double>& centers, double spacing_floor, double x,
             const char* which) const;

  std::vector<double> first_centers_;
  std::vector<double> second_centers_;
  double first_spacing_ = 0.0;   // smallest center spacing, match tolerance base
  double second_spacing_ = 0.0;
  std::vector<std::int64_t> counts_;  // row-major [i * n2 + j]
  std::int64_t total_ = 0;
};

// Count all records into a fresh table.
FrequencyTable accumulate(const std::vector<TrialRecord>& records,
                          std::vector<double> first_centers,
                          std::vector<double> second_centers);

enum class Verdict { Converged, Inconclusive };

// Relative-frequency trajectory of one event along checkpoints, with the
// tail-oscillation verdict: converged iff the largest gap between any two
// of the last three checkpoint frequencies stays within 4 binomial
// confidence half-widths at the final N.
struct ConvergenceReport {
  std::vector<std::int64_t> checkpoints;
  std::vector<double> trajectory;
  double oscillation = 0.0;
  double half_width = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

// Powers of two from 64 up to n, with n itself appended when it is not a
// power of two.
std::vector<std::int64_t> default_checkpoints(std::int64_t n);

// hits[k] says whether trial k realized the event. Checkpoints must be
// increasing, within range, and at least 4 of them (InsufficientData).
ConvergenceReport convergence_report(const std::vector<std::uint8_t>& hits,
                                     const std::vector<std::int64_t>& checkpoints);
ConvergenceReport stream_convergence(const std::vector<std::uint8_t>& hits);

// Event sequence "record lies in first_set x second_set".
std::vector<std::uint8_t> membership_sequence(const std::vector<TrialRecord>& records,
                                              const SampleSet& first_set,
                                              const SampleSet& second_set);

// --- synthetic outcome streams for exercising the verdict machinery ---

// I.i.d. coin with success probability q (per-trial counter streams).
std::vector<std::uint8_t> bernoulli_stream(double q, std::int64_t n,
                                           std::uint64_t seed);

// Deterministic adversarial sequence: blocks of all-hits and all-misses
// whose sizes double, so the relative frequency oscillates between ~2/3
// and ~1/3 forever and never settles.
std::vector<std::uint8_t> block_oscillation_stream(std::int64_t n);

// Toy non-physical stream: a coin whose bias is shifted by
// gain * re_d with a sign that flips between doubling blocks — a cartoon
// of interference terms leaking into block-wise statistics. For
// exercising the diagnostics only; no quantum model produces this.
std::vector<std::uint8_t> interference_leak_stream(double q, double gain, double re_d,
                                                   std::int64_t n, std::uint64_t seed);

}  // namespace twotime
