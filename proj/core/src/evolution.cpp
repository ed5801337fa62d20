#include "twotime/evolution.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"

namespace twotime {

namespace {

// FFTW plan creation/destruction is not thread-safe; executions via the
// new-array interface are. One global mutex for the former.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// RAII scratch buffer with FFTW's preferred alignment, so new-array
// execution of plans created on fftw_malloc'd buffers is legal.
struct FftwBuffer {
  explicit FftwBuffer(int n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

struct FreeEvolver::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

FreeEvolver::FreeEvolver(PositionGrid grid, double mass)
    : grid_(grid), mass_(mass), plans_(std::make_unique<Plans>()) {
  if (!(mass_ > 0.0)) {
    throw InvalidArgument("state_space", "FreeEvolution.m", "mass must be positive");
  }
  const int n = grid_.n_points;
  k2_.resize(n);
  for (int j = 0; j < n; ++j) {
    const int jw = (j <= n / 2) ? j : j - n;  // signed FFT frequency
    const double k = 2.0 * kPi * jw / (n * grid_.dx);
    k2_[j] = k * k;
  }
  // FFTW_ESTIMATE: heuristic (not timing-based) planning, so the chosen
  // algorithm — and therefore the round-off pattern of every result — is
  // reproducible run to run. Required by the determinism contract.
  std::lock_guard<std::mutex> lock(planner_mutex());
  FftwBuffer a(n), b(n);
  plans_->forward = fftw_plan_dft_1d(n, a.data, b.data, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_1d(n, a.data, b.data, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FreeEvolver::~FreeEvolver() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

double FreeEvolver::no_tail_guard() { return std::numeric_limits<double>::infinity(); }

void FreeEvolver::apply_raw(Eigen::VectorXcd& amp, double t) const {
  if (t == 0.0) return;  // exact identity, bit-for-bit
  const int n = grid_.n_points;
  FftwBuffer in(n), out(n);
  for (int k = 0; k < n; ++k) {
    in.data[k][0] = amp[k].real();
    in.data[k][1] = amp[k].imag();
  }
  fftw_execute_dft(plans_->forward, in.data, out.data);
  const double scale = 1.0 / n;
  for (int j = 0; j < grid_.n_points; ++j) {
    const double phase = -k2_[j] * t / (2.0 * mass_);
    const double c = std::cos(phase), s = std::sin(phase);
    const double re = out.data[j][0], im = out.data[j][1];
    out.data[j][0] = (re * c - im * s) * scale;
    out.data[j][1] = (re * s + im * c) * scale;
  }
  fftw_execute_dft(plans_->backward, out.data, in.data);
  for (int k = 0; k < n; ++k) amp[k] = Complex(in.data[k][0], in.data[k][1]);
}

PureState FreeEvolver::apply(const PureState& psi, double t, double guard) const {
  if (!(psi.grid() == grid_)) {
    throw InvalidArgument("state_space", "evolve.state", "state grid does not match evolver");
  }
  if (t == 0.0) return psi;
  Eigen::VectorXcd amp = psi.amplitudes();
  apply_raw(amp, t);
  PureState out(grid_, std::move(amp), /*renormalize=*/false);
  const double tail = boundary_band_mass(out);
  if (tail > guard) {
    throw SupportOverflow("state_space", "evolve",
                          "boundary-band mass " + std::to_string(tail) +
                              " after evolution exceeds guard " + std::to_string(guard));
  }
  return out;
}

void FreeEvolver::apply_raw(Eigen::MatrixXcd& kernel, double t) const {
  if (t == 0.0) return;
  const int n = grid_.n_points;
  // U K U^dagger: apply U to every column, then U^* to every row
  // (conjugate the row, evolve, conjugate back).
  Eigen::VectorXcd work(n);
  for (int c = 0; c < n; ++c) {
    work = kernel.col(c);
    apply_raw(work, t);
    kernel.col(c) = work;
  }
  for (int r = 0; r < n; ++r) {
    work = kernel.row(r).conjugate().transpose();
    apply_raw(work, t);
    kernel.row(r) = work.conjugate().transpose();
  }
}

DensityMatrix FreeEvolver::apply(const DensityMatrix& rho, double t, double guard) const {
  if (!(rho.grid() == grid_)) {
    throw InvalidArgument("state_space", "evolve.rho", "state grid does not match evolver");
  }
  if (t == 0.0) return rho;
  Eigen::MatrixXcd m = rho.elements();
  apply_raw(m, t);
  DensityMatrix out(grid_, std::move(m));
  const double tail = boundary_band_mass(out);
  if (tail > guard) {
    throw SupportOverflow("state_space", "evolve",
                          "boundary-band mass " + std::to_string(tail) +
                              " after evolution exceeds guard " + std::to_string(guard));
  }
  return out;
}

Eigen::MatrixXcd FreeEvolver::materialize(double t) const {
  const int n = grid_.n_points;
  Eigen::MatrixXcd u(n, n);
  Eigen::VectorXcd col(n);
  for (int c = 0; c < n; ++c) {
    col.setZero();
    col[c] = 1.0;
    apply_raw(col, t);
    u.col(c) = col;
  }
  return u;
}

PureState evolve(const PureState& psi, double mass, double t) {
  return FreeEvolver(psi.grid(), mass).apply(psi, t);
}

DensityMatrix evolve(const DensityMatrix& rho, double mass, double t) {
  return FreeEvolver(rho.grid(), mass).apply(rho, t);
}

}  // namespace twotime
