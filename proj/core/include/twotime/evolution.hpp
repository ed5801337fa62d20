#pragma once

#include <Eigen/Dense>
#include <memory>

#include "twotime/state.hpp"

namespace twotime {

// Default wrap-around guard: evolved states whose boundary-band mass
// exceeds this are rejected (the periodic spectral step would alias that
// mass to the far side of the grid).
inline constexpr double kEvolveTailGuard = 1e-6;

// Free-particle propagator exp(-i H t) with H = p^2 / (2m), applied
// spectrally: FFT, multiply exp(-i k^2 t / (2m)), inverse FFT. Unitary to
// round-off, O(n log n), periodic boundary conditions. Negative t applies
// the adjoint (backward evolution).
//
// Thread safety: one FreeEvolver may be used from many threads
// concurrently (plan execution uses the new-array interface on per-call
// scratch buffers; plan creation is serialized internally).
class FreeEvolver {
public:
  FreeEvolver(PositionGrid grid, double mass);
  ~FreeEvolver();

  FreeEvolver(const FreeEvolver&) = delete;
  FreeEvolver& operator=(const FreeEvolver&) = delete;

  const PositionGrid& grid() const { return grid_; }
  double mass() const { return mass_; }

  // Evolve by t; guard = maximum tolerated boundary-band mass of the
  // output. Pass no_tail_guard() for chain-internal steps where the
  // periodic model itself is the ground truth (e.g. post-collapse
  // propagation of sharp-edged states, whose diffraction tails are heavy
  // but are treated identically by every code path being compared).
  PureState apply(const PureState& psi, double t,
                  double guard = kEvolveTailGuard) const;
  DensityMatrix apply(const DensityMatrix& rho, double t,
                      double guard = kEvolveTailGuard) const;

  // Raw spectral step on an amplitude vector (no guard, no type wrap).
  void apply_raw(Eigen::VectorXcd& amp, double t) const;

  // Raw U K U^dagger on an (un-normalized) kernel matrix.
  void apply_raw(Eigen::MatrixXcd& kernel, double t) const;

  // Dense propagator matrix, for unitarity tests and small-n oracles.
  Eigen::MatrixXcd materialize(double t) const;

  static double no_tail_guard();

private:
  PositionGrid grid_;
  double mass_;
  Eigen::VectorXd k2_;  // squared spectral wavenumbers, FFT layout
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

// One-shot convenience forms of the generic state/rho evolution
// operation. Construct a FreeEvolver directly in loops.
PureState evolve(const PureState& psi, double mass, double t);
DensityMatrix evolve(const DensityMatrix& rho, double mass, double t);

}  // namespace twotime
