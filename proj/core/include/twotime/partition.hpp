#pragma once

#include <string>
#include <vector>

#include "twotime/measurement.hpp"

namespace twotime {

// Half-open interval [lo, hi) on the line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// An experimenter-chosen outcome set: a named union of disjoint
// half-open intervals.
struct SampleSet {
  std::string name;
  std::vector<Interval> intervals;
};

// One minimal-resolution cell of a sample set, with its representative
// point (the midpoint).
struct Cell {
  double lo = 0.0;
  double hi = 0.0;
  double center = 0.0;
};

// Sample sets subdivided into mutually exclusive resolution-delta cells.
// Each interval is tiled from its own left edge; interval lengths must be
// integer multiples of delta (AlignmentError otherwise), so the cells of
// a set reproduce the set exactly, and cells of different sets never
// overlap because the sets themselves are disjoint.
class SamplePartition {
public:
  static SamplePartition build(const PositionGrid& grid, double delta,
                               std::vector<SampleSet> sets);

  const PositionGrid& grid() const { return grid_; }
  double delta() const { return delta_; }
  int set_count() const { return static_cast<int>(sets_.size()); }
  const SampleSet& set(int i) const { return sets_.at(i); }
  const std::vector<SampleSet>& sets() const { return sets_; }
  const std::vector<Cell>& cells(int i) const { return cells_.at(i); }
  int total_cell_count() const;

  // True when the union of all sets covers every grid point.
  bool complete() const { return complete_; }

  // Same sets re-tiled at a different resolution (e.g. 2*delta for the
  // resolution-difference quantity). AlignmentError if set boundaries do
  // not lie on the coarser lattice.
  SamplePartition with_resolution(double new_delta) const;

  int set_index(const std::string& name) const;  // -1 if absent

private:
  SamplePartition() = default;
  PositionGrid grid_;
  double delta_ = 0.0;
  std::vector<SampleSet> sets_;
  std::vector<std::vector<Cell>> cells_;
  bool complete_ = false;
};

// Measurement operator of one cell (kind decides sharp vs smeared).
MeasurementOperator cell_operator(const PositionGrid& grid, OperatorKind kind,
                                  const Cell& cell);

// Set-level operator: sum of the set's cell operators. For sharp cells
// this is exactly the indicator of the set.
MeasurementOperator set_operator(const SamplePartition& partition, OperatorKind kind, int i);

// Sharp indicator of a bare sample set (no cell structure involved);
// used by single-time probabilities, which are statements about sets,
// not about devices.
MeasurementOperator set_indicator(const PositionGrid& grid, const SampleSet& set);

// Largest point-wise value of sum_cells M_cell(x)^2 over all cells of
// all sets. Exactly 1 on covered points for sharp partitions; may exceed
// 1 for smeared tilings (over-completeness), which is reported, never
// silently corrected.
double overlap_factor(const SamplePartition& partition, OperatorKind kind);

// Membership of a point in a set's half-open intervals.
bool set_contains(const SampleSet& set, double x);

// Order-of-magnitude bound exp(-(L/delta)^2) on the probability mass
// whose set assignment is ambiguous because device dots have finite size
// delta; L is the set's smallest interval length (the most conservative
// "typical size"). Sets misaligned with the cell lattice are rejected
// outright (AlignmentError), so this bound is reported alongside results
// rather than silently absorbed into them.
double boundary_ambiguity_bound(const SampleSet& set, double delta);

}  // namespace twotime
