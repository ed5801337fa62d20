#include "twotime/state.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"

namespace twotime {

PureState::PureState(PositionGrid grid, Eigen::VectorXcd amplitudes, bool renormalize)
    : grid_(grid), amp_(std::move(amplitudes)) {
  if (amp_.size() != grid_.n_points) {
    throw InvalidArgument("state_space", "PureState.amplitudes",
                          "amplitude vector length does not match grid");
  }
  const double n2 = amp_.squaredNorm() * grid_.dx;
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw InvalidArgument("state_space", "PureState.amplitudes",
                          "state has zero or non-finite norm");
  }
  if (renormalize) {
    amp_ /= std::sqrt(n2);
  } else if (std::abs(n2 - 1.0) > 1e-10) {
    throw InvalidArgument("state_space", "PureState.amplitudes",
                          "state is not normalized (|norm^2 - 1| = " +
                              std::to_string(std::abs(n2 - 1.0)) + ")");
  }
}

double PureState::norm_squared() const { return amp_.squaredNorm() * grid_.dx; }

double PureState::mean_position() const {
  NeumaierSum s;
  for (int k = 0; k < grid_.n_points; ++k) {
    s.add(grid_.x(k) * std::norm(amp_[k]) * grid_.dx);
  }
  return s.value();
}

double PureState::position_variance() const {
  const double mu = mean_position();
  NeumaierSum s;
  for (int k = 0; k < grid_.n_points; ++k) {
    s.add(sq(grid_.x(k) - mu) * std::norm(amp_[k]) * grid_.dx);
  }
  return s.value();
}

DensityMatrix::DensityMatrix(PositionGrid grid, Eigen::MatrixXcd elements)
    : grid_(grid), rho_(std::move(elements)) {
  if (rho_.rows() != grid_.n_points || rho_.cols() != grid_.n_points) {
    throw InvalidArgument("state_space", "DensityMatrix.elements",
                          "matrix dimensions do not match grid");
  }
  const double herm = hermiticity_defect();
  if (!(herm <= 1e-12)) {
    throw InvalidArgument("state_space", "DensityMatrix.elements",
                          "kernel is not Hermitian (max |rho - rho^dagger| = " +
                              std::to_string(herm) + ")");
  }
  const double tr = trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw InvalidArgument("state_space", "DensityMatrix.elements",
                          "trace is not 1 (got " + std::to_string(tr) + ")");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  // rho(x,y) = psi(x) conj(psi(y)); with the dx trace convention this has
  // trace sum |psi_k|^2 dx = 1 exactly when psi is normalized.
  Eigen::MatrixXcd rho = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(psi.grid(), std::move(rho));
}

DensityMatrix DensityMatrix::mixture(const std::vector<PureState>& states,
                                     const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size()) {
    throw InvalidArgument("state_space", "DensityMatrix.mixture",
                          "need matching non-empty states and weights");
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw InvalidArgument("state_space", "DensityMatrix.mixture",
                            "weights must be non-negative");
    }
    wsum += w;
  }
  if (!(wsum > 0.0)) {
    throw InvalidArgument("state_space", "DensityMatrix.mixture",
                          "weights must not all vanish");
  }
  const PositionGrid& g = states.front().grid();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(g.n_points, g.n_points);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].grid() == g)) {
      throw InvalidArgument("state_space", "DensityMatrix.mixture",
                            "all states must share one grid");
    }
    rho += (weights[i] / wsum) * (states[i].amplitudes() * states[i].amplitudes().adjoint());
  }
  return DensityMatrix(g, std::move(rho));
}

double DensityMatrix::trace() const {
  NeumaierSum s;
  for (int k = 0; k < grid_.n_points; ++k) s.add(rho_(k, k).real() * grid_.dx);
  return s.value();
}

double DensityMatrix::hermiticity_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::smallest_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() * grid_.dx;
}

int boundary_band_points(const PositionGrid& grid) {
  const int band = grid.n_points / 64;
  return band < 2 ? 2 : band;
}

double boundary_band_mass(const PureState& psi) {
  const int n = psi.size();
  const int band = boundary_band_points(psi.grid());
  NeumaierSum s;
  for (int k = 0; k < band; ++k) {
    s.add(std::norm(psi.amplitudes()[k]) * psi.grid().dx);
    s.add(std::norm(psi.amplitudes()[n - 1 - k]) * psi.grid().dx);
  }
  return s.value();
}

double boundary_band_mass(const DensityMatrix& rho) {
  const int n = rho.size();
  const int band = boundary_band_points(rho.grid());
  NeumaierSum s;
  for (int k = 0; k < band; ++k) {
    s.add(rho.elements()(k, k).real() * rho.grid().dx);
    s.add(rho.elements()(n - 1 - k, n - 1 - k).real() * rho.grid().dx);
  }
  return s.value();
}

PureState make_gaussian_state(const PositionGrid& grid, double sigma, double p,
                              double center) {
  if (!(sigma > 0.0)) {
    throw InvalidArgument("state_space", "make_gaussian_state.sigma",
                          "sigma must be positive");
  }
  if (sigma < 4.0 * grid.dx) {
    throw GridTooCoarse("state_space", "make_gaussian_state.sigma",
                        "sigma must be at least 4 dx (sigma = " + std::to_string(sigma) +
                            ", dx = " + std::to_string(grid.dx) + ")");
  }
  if (std::abs(p) * grid.dx > kPi / 4.0) {
    throw GridTooCoarse("state_space", "make_gaussian_state.p",
                        "momentum phase advances more than pi/4 per grid step");
  }
  Eigen::VectorXcd amp(grid.n_points);
  for (int k = 0; k < grid.n_points; ++k) {
    const double x = grid.x(k);
    const double u = (x - center) / sigma;
    amp[k] = std::polar(std::exp(-0.5 * u * u), p * x);
  }
  PureState psi(grid, std::move(amp), /*renormalize=*/true);
  const double tail = boundary_band_mass(psi);
  if (tail >= 1e-8) {
    throw SupportOverflow("state_space", "make_gaussian_state",
                          "wave-packet boundary tail mass " + std::to_string(tail) +
                              " exceeds 1e-8; enlarge the grid");
  }
  return psi;
}

}  // namespace twotime
