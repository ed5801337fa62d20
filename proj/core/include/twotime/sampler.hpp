#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twotime/frequency.hpp"
#include "twotime/two_time.hpp"

namespace twotime {

// What sits at one of the two measurement stations.
struct DeviceModel {
  enum class Kind {
    FullRecorder,  // registers the resolution-delta cell of every particle
    SlitFilter,    // passes the sample set U, blocks everything else
  };

  Kind kind = Kind::FullRecorder;
  double delta = 0.0;  // FullRecorder cell size
  SampleSet slit;      // SlitFilter pass set

  static DeviceModel full_recorder(double delta);
  static DeviceModel slit_filter(SampleSet pass_set);
};

// Outcome encoding of one trial. For a FullRecorder the value is the
// index into the device's cell-center list; for a SlitFilter, kPassed.
// kBlocked means the particle was absorbed (and the second field of a
// first-stage absorption is kBlocked as well).
inline constexpr std::int32_t kBlocked = -1;
inline constexpr std::int32_t kPassed = 0;

struct TrialOutcome {
  std::int32_t first = kBlocked;
  std::int32_t second = kBlocked;
};

// Draws two-time outcomes by the textbook chain: Born draw at t1,
// projective collapse, free evolution to t2, Born draw again. The joint
// cell-level law this realizes is exactly the resolution-indexed
// two-time probability of the engine (product of the two Born factors).
//
// Sharp devices only: the collapse chain is a statement about
// projectors. All per-trial randomness comes from the counter stream of
// (master seed, trial index), so results are schedule-independent.
class TrialSampler {
public:
  TrialSampler(TwoTimeSpec spec, DeviceModel first_device, DeviceModel second_device);

  const TwoTimeSpec& spec() const { return spec_; }
  const DeviceModel& first_device() const { return first_device_; }
  const DeviceModel& second_device() const { return second_device_; }

  // Cell centers of the devices' tilings (empty for SlitFilter).
  const std::vector<double>& first_centers() const { return first_centers_; }
  const std::vector<double>& second_centers() const { return second_centers_; }

  TrialOutcome sample(std::uint64_t master_seed, std::uint64_t trial_index) const;

  // Model joint law the sampler draws from: rows = first-stage outcomes,
  // columns = second-stage outcomes (recorder cells, or pass for a
  // filter). Row sums give the first-stage marginal law.
  std::vector<std::vector<double>> joint_model() const;

private:
  struct Branch {
    double weight = 0.0;             // first-stage probability
    std::vector<double> second_cdf;  // cumulative conditional law
    double second_total = 0.0;
  };

  TwoTimeSpec spec_;
  DeviceModel first_device_;
  DeviceModel second_device_;
  std::vector<double> first_centers_;
  std::vector<double> second_centers_;
  std::vector<double> first_cdf_;
  double first_total_ = 0.0;
  std::vector<Branch> branches_;
};

// Run trials 0..n-1, any thread count, byte-identical results.
std::vector<TrialOutcome> run_trials(const TrialSampler& sampler, std::int64_t n,
                                     std::uint64_t master_seed, int threads = 1);

// Recorder outcomes as TrialRecords (blocked trials are skipped; with
// two FullRecorders nothing is ever blocked).
std::vector<TrialRecord> to_records(const TrialSampler& sampler,
                                    const std::vector<TrialOutcome>& outcomes);

// Empirical vs predicted probabilities for every coarse set pair.
struct RuleComparisonRow {
  std::string first_set;
  std::string second_set;
  double empirical = 0.0;
  double contextual = 0.0;   // cell-sum rule (what the sampler realizes)
  double standard = 0.0;     // merged-projector sequential rule
  double defect = 0.0;       // standard - contextual = total interference
  double z_contextual = 0.0;
  double z_standard = 0.0;
  std::int64_t trials = 0;
};

std::vector<RuleComparisonRow> compare_rules(const FrequencyTable& table,
                                             const TwoTimeEngine& engine);

// Head-to-head of the two experimental designs on the same set pair:
// two successive slit filters vs a full recording device whose outcomes
// are sorted into the sets afterwards.
struct FilterVsDeviceReport {
  double filter_rate = 0.0;             // pass-pass frequency
  double recorder_rate = 0.0;           // recorded-in-(U1 x U2) frequency
  double standard_prediction = 0.0;     // merged-projector rule
  double contextual_prediction = 0.0;   // cell-sum rule
  double difference_empirical = 0.0;    // filter_rate - recorder_rate
  double difference_predicted = 0.0;    // standard - contextual
  double z_filter_vs_standard = 0.0;
  double z_recorder_vs_contextual = 0.0;
  double z_difference = 0.0;  // empirical difference vs predicted difference
  std::int64_t trials = 0;
};

FilterVsDeviceReport filter_vs_device(const TwoTimeSpec& spec, int first_set,
                                      int second_set, std::int64_t trials,
                                      std::uint64_t master_seed, int threads = 1);

}  // namespace twotime
