#pragma once

#include <Eigen/Dense>
#include <utility>

#include "twotime/state.hpp"

namespace twotime {

enum class OperatorKind {
  SharpInterval,    // projector onto [x0 - delta/2, x0 + delta/2)
  GaussianSmeared,  // multiplication by exp(-(x-x0)^2 / (2 delta^2))
};

// Resolution-delta position measurement operator. Diagonal in the
// position basis; sharp variants are exact 0/1 projectors on half-open
// intervals (boundary points belong to the right-hand cell, so adjacent
// cells are disjoint and a 2-delta cell is exactly the sum of its two
// delta halves). Smeared variants are the un-normalized Gaussians of the
// fuzzy-detector model (sup norm 1, not idempotent).
class MeasurementOperator {
public:
  const PositionGrid& grid() const { return grid_; }
  OperatorKind kind() const { return kind_; }
  double center() const { return x0_; }
  double resolution() const { return delta_; }
  const Eigen::VectorXd& diagonal() const { return diag_; }

  // Outcome weight of this operator on a state: Tr(M rho M) = sum_k
  // M_k^2 rho_kk dx. For sharp projectors (M^2 = M) this equals Tr(rho M).
  double weight(const PureState& psi) const;
  double weight(const DensityMatrix& rho) const;

  // M |psi> (not normalized).
  Eigen::VectorXcd apply(const PureState& psi) const;

private:
  friend MeasurementOperator make_measurement_operator(const PositionGrid&, OperatorKind,
                                                       double, double);
  friend MeasurementOperator merge_operators(const std::vector<MeasurementOperator>&);
  MeasurementOperator() = default;

  PositionGrid grid_;
  OperatorKind kind_ = OperatorKind::SharpInterval;
  double x0_ = 0.0;
  double delta_ = 0.0;
  Eigen::VectorXd diag_;
};

// Build the operator for a cell centered at x0 with resolution delta.
// Preconditions: delta >= 2 dx (ResolutionBelowGrid otherwise) and
// [x0 - delta/2, x0 + delta/2] inside the grid range (OutOfRange).
MeasurementOperator make_measurement_operator(const PositionGrid& grid, OperatorKind kind,
                                              double x0, double delta);

// Element-wise sum of cell operators (the set-level operator P_U for a
// union of disjoint sharp cells; the Gaussian tiling sum for smeared
// ones). Kind/center/resolution metadata is taken from the first entry.
MeasurementOperator merge_operators(const std::vector<MeasurementOperator>& ops);

// Outcome update rule: rho -> M rho M / Tr(M rho M), paired with the
// outcome weight Tr(M rho M) (= Tr(rho M) for sharp projectors).
// Throws ZeroWeightOutcome if the weight underflows (below 1e-300).
std::pair<DensityMatrix, double> collapse(const DensityMatrix& rho,
                                          const MeasurementOperator& m);
std::pair<PureState, double> collapse(const PureState& psi, const MeasurementOperator& m);

}  // namespace twotime
