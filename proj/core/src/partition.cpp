#include "twotime/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"

namespace twotime {

namespace {

struct IndexRange {
  int lo, hi;  // grid-point index range [lo, hi)
  int set;
};

}  // namespace

SamplePartition SamplePartition::build(const PositionGrid& grid, double delta,
                                       std::vector<SampleSet> sets) {
  if (sets.empty()) {
    throw InvalidPartition("two_time_probability", "SamplePartition.sets",
                           "partition needs at least one sample set");
  }
  if (delta < 2.0 * grid.dx * (1.0 - kBoundarySnap)) {
    throw ResolutionBelowGrid("two_time_probability", "SamplePartition.delta",
                              "cell size " + std::to_string(delta) +
                                  " below two grid steps");
  }
  SamplePartition p;
  p.grid_ = grid;
  p.delta_ = delta;
  p.cells_.resize(sets.size());

  std::vector<IndexRange> ranges;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].intervals.empty()) {
      throw InvalidPartition("two_time_probability", "SamplePartition.sets",
                             "set '" + sets[i].name + "' has no intervals");
    }
    for (const Interval& iv : sets[i].intervals) {
      if (!(iv.hi > iv.lo)) {
        throw InvalidPartition("two_time_probability", "SamplePartition.sets",
                               "set '" + sets[i].name + "' has an empty interval");
      }
      const double slack = kBoundarySnap * grid.dx;
      if (iv.lo < grid.x_min - slack || iv.hi > grid.x_max + slack) {
        throw OutOfRange("two_time_probability", "SamplePartition.sets",
                         "set '" + sets[i].name + "' leaves the grid range");
      }
      // Every boundary of the set must land on the cell lattice tiled
      // from the interval's left edge.
      const double cells_exact = (iv.hi - iv.lo) / delta;
      const double cells_rounded = std::round(cells_exact);
      if (cells_rounded < 1.0 || std::abs(cells_exact - cells_rounded) > 1e-9) {
        throw AlignmentError("two_time_probability", "SamplePartition.sets",
                             "interval [" + std::to_string(iv.lo) + ", " +
                                 std::to_string(iv.hi) + ") of set '" + sets[i].name +
                                 "' is not an integer number of cells of size " +
                                 std::to_string(delta));
      }
      const int m = static_cast<int>(cells_rounded);
      for (int c = 0; c < m; ++c) {
        Cell cell;
        cell.lo = iv.lo + c * delta;
        cell.hi = iv.lo + (c + 1) * delta;
        cell.center = 0.5 * (cell.lo + cell.hi);
        p.cells_[i].push_back(cell);
      }
      ranges.push_back({grid.boundary_index(iv.lo), grid.boundary_index(iv.hi),
                        static_cast<int>(i)});
    }
  }

  // Pairwise disjointness of the sets, checked on grid indices so the
  // half-open snap convention is what decides borderline points.
  std::sort(ranges.begin(), ranges.end(),
            [](const IndexRange& a, const IndexRange& b) { return a.lo < b.lo; });
  int covered = 0;
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    covered += ranges[k].hi - ranges[k].lo;
    if (k > 0 && ranges[k].lo < ranges[k - 1].hi) {
      throw InvalidPartition("two_time_probability", "SamplePartition.sets",
                             "sets '" + sets[ranges[k - 1].set].name + "' and '" +
                                 sets[ranges[k].set].name + "' overlap on the grid");
    }
  }
  p.complete_ = (covered == grid.n_points);
  p.sets_ = std::move(sets);
  return p;
}

int SamplePartition::total_cell_count() const {
  int total = 0;
  for (const auto& cs : cells_) total += static_cast<int>(cs.size());
  return total;
}

SamplePartition SamplePartition::with_resolution(double new_delta) const {
  return build(grid_, new_delta, sets_);
}

int SamplePartition::set_index(const std::string& name) const {
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (sets_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

MeasurementOperator cell_operator(const PositionGrid& grid, OperatorKind kind,
                                  const Cell& cell) {
  return make_measurement_operator(grid, kind, cell.center, cell.hi - cell.lo);
}

MeasurementOperator set_operator(const SamplePartition& partition, OperatorKind kind,
                                 int i) {
  std::vector<MeasurementOperator> ops;
  ops.reserve(partition.cells(i).size());
  for (const Cell& c : partition.cells(i)) {
    ops.push_back(cell_operator(partition.grid(), kind, c));
  }
  return merge_operators(ops);
}

MeasurementOperator set_indicator(const PositionGrid& grid, const SampleSet& set) {
  std::vector<MeasurementOperator> ops;
  ops.reserve(set.intervals.size());
  for (const Interval& iv : set.intervals) {
    ops.push_back(make_measurement_operator(grid, OperatorKind::SharpInterval,
                                            0.5 * (iv.lo + iv.hi), iv.hi - iv.lo));
  }
  return merge_operators(ops);
}

double overlap_factor(const SamplePartition& partition, OperatorKind kind) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(partition.grid().n_points);
  for (int i = 0; i < partition.set_count(); ++i) {
    for (const Cell& c : partition.cells(i)) {
      const MeasurementOperator op = cell_operator(partition.grid(), kind, c);
      total += op.diagonal().cwiseAbs2();
    }
  }
  return total.maxCoeff();
}

bool set_contains(const SampleSet& set, double x) {
  for (const Interval& iv : set.intervals) {
    if (x >= iv.lo && x < iv.hi) return true;
  }
  return false;
}

double boundary_ambiguity_bound(const SampleSet& set, double delta) {
  if (set.intervals.empty()) {
    throw InvalidPartition("two_time_probability", "SampleSet.intervals",
                           "set '" + set.name + "' has no intervals");
  }
  if (!(delta > 0.0)) {
    throw InvalidArgument("two_time_probability", "boundary_ambiguity_bound.delta",
                          "resolution must be positive");
  }
  double min_length = set.intervals.front().hi - set.intervals.front().lo;
  for (const Interval& iv : set.intervals) {
    min_length = std::min(min_length, iv.hi - iv.lo);
  }
  return std::exp(-sq(min_length / delta));
}

}  // namespace twotime
