#include "twotime/measurement.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"

namespace twotime {

double MeasurementOperator::weight(const PureState& psi) const {
  NeumaierSum s;
  for (int k = 0; k < grid_.n_points; ++k) {
    s.add(sq(diag_[k]) * std::norm(psi.amplitudes()[k]) * grid_.dx);
  }
  return s.value();
}

double MeasurementOperator::weight(const DensityMatrix& rho) const {
  NeumaierSum s;
  for (int k = 0; k < grid_.n_points; ++k) {
    s.add(sq(diag_[k]) * rho.elements()(k, k).real() * grid_.dx);
  }
  return s.value();
}

Eigen::VectorXcd MeasurementOperator::apply(const PureState& psi) const {
  return diag_.cast<Complex>().cwiseProduct(psi.amplitudes());
}

MeasurementOperator make_measurement_operator(const PositionGrid& grid, OperatorKind kind,
                                              double x0, double delta) {
  if (delta < 2.0 * grid.dx * (1.0 - kBoundarySnap)) {
    throw ResolutionBelowGrid("state_space", "make_measurement_operator.delta",
                              "resolution " + std::to_string(delta) +
                                  " below two grid steps (dx = " +
                                  std::to_string(grid.dx) + ")");
  }
  const double lo = x0 - delta / 2.0;
  const double hi = x0 + delta / 2.0;
  const double slack = kBoundarySnap * grid.dx;
  if (lo < grid.x_min - slack || hi > grid.x_max + slack) {
    throw OutOfRange("state_space", "make_measurement_operator.x0",
                     "cell [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         ") outside grid range");
  }
  MeasurementOperator m;
  m.grid_ = grid;
  m.kind_ = kind;
  m.x0_ = x0;
  m.delta_ = delta;
  m.diag_ = Eigen::VectorXd::Zero(grid.n_points);
  if (kind == OperatorKind::SharpInterval) {
    // Indices, not float comparisons: the half-open cell is the index
    // range [boundary_index(lo), boundary_index(hi)), which makes
    // adjacent-cell disjointness and the split identity
    // P(2 delta at x0) = P(delta at x0-delta/2) + P(delta at x0+delta/2)
    // exact by construction.
    const int a = grid.boundary_index(lo);
    const int b = grid.boundary_index(hi);
    for (int k = a; k < b; ++k) m.diag_[k] = 1.0;
  } else {
    for (int k = 0; k < grid.n_points; ++k) {
      const double u = (grid.x(k) - x0) / delta;
      m.diag_[k] = std::exp(-0.5 * u * u);
    }
  }
  return m;
}

MeasurementOperator merge_operators(const std::vector<MeasurementOperator>& ops) {
  if (ops.empty()) {
    throw InvalidArgument("state_space", "merge_operators", "no operators to merge");
  }
  MeasurementOperator m;
  m.grid_ = ops.front().grid();
  m.kind_ = ops.front().kind();
  m.x0_ = ops.front().center();
  m.delta_ = ops.front().resolution();
  m.diag_ = Eigen::VectorXd::Zero(m.grid_.n_points);
  for (const auto& op : ops) {
    if (!(op.grid() == m.grid_)) {
      throw InvalidArgument("state_space", "merge_operators",
                            "operators live on different grids");
    }
    m.diag_ += op.diagonal();
  }
  return m;
}

std::pair<DensityMatrix, double> collapse(const DensityMatrix& rho,
                                          const MeasurementOperator& m) {
  const double w = m.weight(rho);
  if (!(w > 1e-300)) {
    throw ZeroWeightOutcome("state_space", "collapse",
                            "outcome weight " + std::to_string(w) +
                                " below underflow threshold");
  }
  const Eigen::VectorXd& d = m.diagonal();
  Eigen::MatrixXcd out = rho.elements();
  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) out(r, c) *= d[r] * d[c];
  }
  out /= w;
  return {DensityMatrix(rho.grid(), std::move(out)), w};
}

std::pair<PureState, double> collapse(const PureState& psi, const MeasurementOperator& m) {
  const double w = m.weight(psi);
  if (!(w > 1e-300)) {
    throw ZeroWeightOutcome("state_space", "collapse",
                            "outcome weight " + std::to_string(w) +
                                " below underflow threshold");
  }
  Eigen::VectorXcd amp = m.apply(psi) / std::sqrt(w);
  return {PureState(psi.grid(), std::move(amp), /*renormalize=*/false), w};
}

}  // namespace twotime
