#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace twotime {

// Base of all library errors. Every message names the module and the
// field/operation at fault so front-end validation output can point at
// the exact culprit ("module: field: what").
class Error : public std::runtime_error {
public:
  Error(std::string module, std::string field, const std::string& what)
      : std::runtime_error(module + ": " + field + ": " + what),
        module_(std::move(module)),
        field_(std::move(field)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& field() const noexcept { return field_; }

private:
  std::string module_;
  std::string field_;
};

#define TWOTIME_DEFINE_ERROR(NAME)                                       \
  class NAME : public Error {                                            \
  public:                                                                \
    NAME(std::string module, std::string field, const std::string& what) \
        : Error(std::move(module), std::move(field), what) {}            \
  }

// A requested feature is finer than the grid can resolve (wave packet or
// momentum not representable).
TWOTIME_DEFINE_ERROR(GridTooCoarse);
// Wave-packet mass at the grid boundary exceeds the wrap-around guard.
TWOTIME_DEFINE_ERROR(SupportOverflow);
// Measurement resolution below the two-grid-point floor.
TWOTIME_DEFINE_ERROR(ResolutionBelowGrid);
// Operator support (or other coordinate input) outside the grid range.
TWOTIME_DEFINE_ERROR(OutOfRange);
// Collapse onto a region of numerically zero probability.
TWOTIME_DEFINE_ERROR(ZeroWeightOutcome);
// Sample-set boundaries not on the cell lattice (or not coarsenable).
TWOTIME_DEFINE_ERROR(AlignmentError);
// Ill-formed sample partition (overlapping sets, empty sets, ...).
TWOTIME_DEFINE_ERROR(InvalidPartition);
// Trial records do not belong to the partitions they are accumulated into.
TWOTIME_DEFINE_ERROR(PartitionMismatch);
// Two independent computations of the same quantity disagree beyond
// tolerance; indicates a bug, not a user mistake.
TWOTIME_DEFINE_ERROR(InternalInconsistency);
// Not enough data for a statistical verdict (e.g. too few checkpoints).
TWOTIME_DEFINE_ERROR(InsufficientData);
// Generic precondition violation not covered by a more specific type.
TWOTIME_DEFINE_ERROR(InvalidArgument);

#undef TWOTIME_DEFINE_ERROR

}  // namespace twotime
