#pragma once

#include <Eigen/Dense>
#include <complex>

#include "twotime/grid.hpp"

namespace twotime {

using Complex = std::complex<double>;

// Normalized position-space wave function on a grid. The discrete norm
// convention carries dx: sum_k |psi_k|^2 dx = 1, so grid sums of
// |psi|^2 dx approximate continuum integrals directly.
class PureState {
public:
  PureState(PositionGrid grid, Eigen::VectorXcd amplitudes, bool renormalize = true);

  const PositionGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  int size() const { return grid_.n_points; }

  double norm_squared() const;        // sum |psi|^2 dx (should be 1)
  double mean_position() const;       // <x>
  double position_variance() const;   // <(x - <x>)^2>

private:
  PositionGrid grid_;
  Eigen::VectorXcd amp_;
};

// Density matrix with kernel convention rho(x_k, x_l): trace and all
// operator traces carry a factor dx, i.e. Tr(rho) = sum_k rho_kk dx = 1,
// matching the continuum integral convention of the pure-state norm.
class DensityMatrix {
public:
  DensityMatrix(PositionGrid grid, Eigen::MatrixXcd elements);

  static DensityMatrix from_pure(const PureState& psi);
  // Convex mixture of pure states (weights renormalized to sum 1).
  static DensityMatrix mixture(const std::vector<PureState>& states,
                               const std::vector<double>& weights);

  const PositionGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& elements() const { return rho_; }
  int size() const { return grid_.n_points; }

  double trace() const;                       // sum_k rho_kk dx
  double hermiticity_defect() const;          // max |rho - rho^dagger|
  // Smallest eigenvalue of the (Hermitian part of the) kernel times dx;
  // O(n^3), intended for on-demand validation, not per-operation checks.
  double smallest_eigenvalue() const;

private:
  PositionGrid grid_;
  Eigen::MatrixXcd rho_;
};

// Mass (probability) in the guard band of max(2, n/64) points at each
// edge of the grid. The periodic spectral evolution wraps anything that
// reaches a boundary to the other side, so this is the quantity all
// wrap-around guards look at.
int boundary_band_points(const PositionGrid& grid);
double boundary_band_mass(const PureState& psi);
double boundary_band_mass(const DensityMatrix& rho);

// Gaussian wave packet ~ exp(-(x-center)^2/(2 sigma^2) + i p x),
// renormalized on the grid. sigma is the position uncertainty of the
// amplitude (|psi|^2 has variance sigma^2/2), p the mean momentum.
// Preconditions: sigma resolvable (sigma >= 4 dx), momentum phase
// resolvable (|p| dx <= pi/4), and boundary tail mass < 1e-8.
PureState make_gaussian_state(const PositionGrid& grid, double sigma, double p,
                              double center = 0.0);

}  // namespace twotime
