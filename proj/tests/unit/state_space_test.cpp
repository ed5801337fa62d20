// States and free evolution, checked against closed forms and against the
// naive dense DFT propagator (oracles.hpp) rather than against the
// library's own spectral pipeline.

#include <doctest.h>

#include <cmath>
#include <complex>

#include <twotime/errors.hpp>
#include <twotime/evolution.hpp>
#include <twotime/rng.hpp>
#include <twotime/state.hpp>

#include "oracles.hpp"

using namespace twotime;

namespace {

PositionGrid wide_grid() { return PositionGrid::make(-16.0, 16.0, 512); }

// Random normalized state for unitarity checks: seeded, so failures
// reproduce.
PureState random_state(const PositionGrid& grid, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXcd amp(grid.n_points);
  for (int k = 0; k < grid.n_points; ++k) {
    amp(k) = Complex(rng.next_double() - 0.5, rng.next_double() - 0.5);
  }
  return PureState(grid, amp);
}

double max_abs_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("grid: construction guards and point layout") {
  CHECK_THROWS_AS(PositionGrid::make(-1.0, -2.0, 64), InvalidArgument);
  CHECK_THROWS_AS(PositionGrid::make(-1.0, 1.0, 96), InvalidArgument);   // not a power of two
  CHECK_THROWS_AS(PositionGrid::make(-1.0, 1.0, 4), InvalidArgument);    // too few points

  const PositionGrid g = PositionGrid::make(-2.0, 2.0, 8);
  CHECK(g.dx == doctest::Approx(0.5));
  CHECK(g.x(0) == doctest::Approx(-2.0));
  CHECK(g.x(7) == doctest::Approx(1.5));  // half-open: x_max itself is not a point
  CHECK(g.width() == doctest::Approx(4.0));
}

TEST_CASE("grid: boundary_index uses the half-open convention with snap") {
  const PositionGrid g = PositionGrid::make(-2.0, 2.0, 8);
  CHECK(g.boundary_index(-2.0) == 0);
  CHECK(g.boundary_index(0.0) == 4);          // on-lattice boundary -> right-hand cell
  CHECK(g.boundary_index(0.0 + 1e-12) == 4);  // within snap of the lattice point
  CHECK(g.boundary_index(0.1) == 5);          // strictly inside a cell -> next point
  CHECK(g.boundary_index(2.0) == 8);          // one past the end
  CHECK(g.boundary_index(-50.0) == 0);        // clamped
  CHECK(g.boundary_index(50.0) == 8);
}

TEST_CASE("gaussian state: zero-momentum packet is real, even, and normalized") {
  const PositionGrid g = wide_grid();
  const PureState psi = make_gaussian_state(g, 1.0, 0.0);

  CHECK(std::abs(psi.norm_squared() - 1.0) <= 1e-12);
  double max_imag = 0.0, max_odd = 0.0;
  const int n = g.n_points;
  for (int k = 0; k < n; ++k) {
    max_imag = std::max(max_imag, std::abs(psi.amplitudes()(k).imag()));
  }
  // Points pair up as x_k <-> x_{n-k} about zero (k = 0 is the unpaired
  // boundary point carrying ~e^{-256} of mass).
  for (int k = 1; k < n; ++k) {
    max_odd = std::max(max_odd,
                       std::abs(psi.amplitudes()(k) - psi.amplitudes()(n - k)));
  }
  CHECK(max_imag <= 1e-12);
  CHECK(max_odd <= 1e-12);
}

TEST_CASE("gaussian state: momentum is a pure phase on the density") {
  const PositionGrid g = wide_grid();
  const PureState still = make_gaussian_state(g, 1.0, 0.0);
  const PureState moving = make_gaussian_state(g, 1.0, 3.0);
  double max_diff = 0.0;
  for (int k = 0; k < g.n_points; ++k) {
    max_diff = std::max(max_diff, std::abs(std::abs(moving.amplitudes()(k)) -
                                           std::abs(still.amplitudes()(k))));
  }
  CHECK(max_diff <= 1e-12);
}

TEST_CASE("gaussian state: density variance is sigma^2/2") {
  const PositionGrid g = wide_grid();
  const PureState psi = make_gaussian_state(g, 2.0, 1.0);
  CHECK(psi.position_variance() == doctest::Approx(2.0).epsilon(0.01));
  CHECK(psi.mean_position() == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("gaussian state: construction guards") {
  const PositionGrid g = wide_grid();  // dx = 1/16
  CHECK_THROWS_AS(make_gaussian_state(g, 0.1, 0.0), GridTooCoarse);   // sigma < 4 dx
  CHECK_THROWS_AS(make_gaussian_state(g, 1.0, 60.0), GridTooCoarse);  // |p| dx > pi/4
  CHECK_THROWS_AS(make_gaussian_state(g, 1.0, 0.0, 15.5), SupportOverflow);
  CHECK_THROWS_AS(make_gaussian_state(g, 8.0, 0.0), SupportOverflow);  // tails clipped
}

TEST_CASE("density matrix: from_pure and mixture keep the invariants") {
  const PositionGrid g = wide_grid();
  const PureState a = make_gaussian_state(g, 1.0, 0.5, -3.0);
  const PureState b = make_gaussian_state(g, 1.5, -0.5, 3.0);

  const DensityMatrix pure = DensityMatrix::from_pure(a);
  CHECK(std::abs(pure.trace() - 1.0) <= 1e-12);
  CHECK(pure.hermiticity_defect() <= 1e-14);

  const DensityMatrix mix = DensityMatrix::mixture({a, b}, {3.0, 1.0});  // renormalized
  CHECK(std::abs(mix.trace() - 1.0) <= 1e-12);
  CHECK(mix.hermiticity_defect() <= 1e-14);
  CHECK(mix.smallest_eigenvalue() >= -1e-12);
  // 3:1 mixture of packets at -3 and +3: mean at -1.5.
  double mean = 0.0;
  for (int k = 0; k < g.n_points; ++k) {
    mean += g.x(k) * mix.elements()(k, k).real() * g.dx;
  }
  CHECK(mean == doctest::Approx(-1.5).epsilon(1e-3));
}

TEST_CASE("evolution: t = 0 is the identity") {
  const PositionGrid g = wide_grid();
  const PureState psi = make_gaussian_state(g, 1.0, 2.0);
  const PureState same = evolve(psi, 1.0, 0.0);
  CHECK(max_abs_diff(psi.amplitudes(), same.amplitudes()) <= 1e-14);
}

TEST_CASE("evolution: centroid rides the classical trajectory") {
  const PositionGrid g = wide_grid();
  const PureState psi = make_gaussian_state(g, 1.0, 2.0);
  const PureState moved = evolve(psi, 1.0, 0.5);
  CHECK(moved.mean_position() == doctest::Approx(1.0).epsilon(1e-3));  // p t / m
}

TEST_CASE("evolution: forward then backward restores the packet") {
  const PositionGrid g = wide_grid();
  const FreeEvolver evolver(g, 1.0);
  const PureState psi = make_gaussian_state(g, 1.0, 2.0);
  const PureState back = evolver.apply(evolver.apply(psi, 0.7), -0.7);
  CHECK(max_abs_diff(psi.amplitudes(), back.amplitudes()) <= 1e-9);
}

TEST_CASE("evolution: norm is preserved for arbitrary states") {
  const PositionGrid g = PositionGrid::make(-8.0, 8.0, 128);
  const FreeEvolver evolver(g, 0.7);
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    const PureState psi = random_state(g, seed);
    Eigen::VectorXcd amp = psi.amplitudes();
    evolver.apply_raw(amp, 1.3);  // raw step: no guard, norm must still hold
    double norm = 0.0;
    for (int k = 0; k < g.n_points; ++k) norm += std::norm(amp(k)) * g.dx;
    CHECK(std::abs(norm - 1.0) <= 1e-9);
  }
}

TEST_CASE("evolution: density variance follows the spreading law") {
  // Var(t) = (sigma^2/2) (1 + (t/(m sigma^2))^2), checked against a
  // hand quadrature over the evolved density (not the class accessor).
  const PositionGrid g = PositionGrid::make(-32.0, 32.0, 1024);
  const double sigma = 2.0, mass = 1.0, t = 2.0;
  const PureState psi = make_gaussian_state(g, sigma, 0.0);
  const PureState out = evolve(psi, mass, t);

  double mean = 0.0, second = 0.0;
  for (int k = 0; k < g.n_points; ++k) {
    const double w = std::norm(out.amplitudes()(k)) * g.dx;
    mean += g.x(k) * w;
    second += g.x(k) * g.x(k) * w;
  }
  const double variance = second - mean * mean;
  const double spread = t / (mass * sigma * sigma);
  const double expected = 0.5 * sigma * sigma * (1.0 + spread * spread);
  CHECK(variance == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("evolution: interval mass matches the erf closed form") {
  // A grid point at x_k carries the mass of [x_k, x_k + dx), so the sum
  // over points in [lo, hi) is a midpoint rule for the continuum integral
  // over [lo - dx/2, hi - dx/2): second-order accurate, hence the tight
  // tolerance on a dx = 1/16 grid.
  const PositionGrid g = PositionGrid::make(-32.0, 32.0, 1024);
  const double sigma = 1.5, p = 0.8, mass = 1.0, t = 1.2;
  const PureState out = evolve(make_gaussian_state(g, sigma, p), mass, t);

  for (double lo : {-1.0, 0.0, 0.5}) {
    const double hi = lo + 1.5;
    double mass_in = 0.0;
    const int k_lo = g.boundary_index(lo), k_hi = g.boundary_index(hi);
    for (int k = k_lo; k < k_hi; ++k) mass_in += std::norm(out.amplitudes()(k)) * g.dx;
    const double expected = oracle::gaussian_interval_probability(
        sigma, p, mass, 0.0, t, lo - 0.5 * g.dx, hi - 0.5 * g.dx);
    CHECK(mass_in == doctest::Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("evolution: spectral step agrees with the dense DFT oracle") {
  const PositionGrid g = PositionGrid::make(-8.0, 8.0, 64);
  const double mass = 1.3, t = 0.9;
  const FreeEvolver evolver(g, mass);
  const Eigen::MatrixXcd u_oracle = oracle::dense_propagator(g, mass, t);

  SUBCASE("materialized propagator matches element-wise") {
    const Eigen::MatrixXcd u = evolver.materialize(t);
    CHECK((u - u_oracle).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("materialized propagator is unitary") {
    const Eigen::MatrixXcd u = evolver.materialize(t);
    const Eigen::MatrixXcd gram = u.adjoint() * u;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(g.n_points, g.n_points);
    CHECK((gram - eye).cwiseAbs().maxCoeff() <= 1e-9);
  }

  SUBCASE("state application matches the oracle matrix-vector product") {
    const PureState psi = random_state(g, 7);
    Eigen::VectorXcd amp = psi.amplitudes();
    evolver.apply_raw(amp, t);
    CHECK(max_abs_diff(amp, u_oracle * psi.amplitudes()) <= 1e-10);
  }

  SUBCASE("kernel application matches U rho U^dag") {
    const DensityMatrix rho = DensityMatrix::from_pure(random_state(g, 9));
    Eigen::MatrixXcd kernel = rho.elements();
    evolver.apply_raw(kernel, t);
    const Eigen::MatrixXcd expected = u_oracle * rho.elements() * u_oracle.adjoint();
    CHECK((kernel - expected).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("evolution: wrap-around guard rejects packets reaching the boundary") {
  const PositionGrid g = wide_grid();
  const PureState psi = make_gaussian_state(g, 1.0, 3.0);  // heading right at speed 3
  CHECK_THROWS_AS(evolve(psi, 1.0, 8.0), SupportOverflow);
  // The same step passes with the guard disabled (periodic model only).
  const FreeEvolver evolver(g, 1.0);
  CHECK_NOTHROW(evolver.apply(psi, 8.0, FreeEvolver::no_tail_guard()));
}

TEST_CASE("boundary band: scales with grid size and captures edge mass") {
  CHECK(boundary_band_points(PositionGrid::make(-1.0, 1.0, 64)) == 2);
  CHECK(boundary_band_points(PositionGrid::make(-1.0, 1.0, 1024)) == 16);

  const PositionGrid g = wide_grid();
  CHECK(boundary_band_mass(make_gaussian_state(g, 1.0, 0.0)) <= 1e-30);
  // A flat state spreads its mass everywhere, band included: 2 * 8 of
  // 512 points -> 1/32 of the total.
  const PureState flat(g, Eigen::VectorXcd::Ones(g.n_points));
  CHECK(boundary_band_mass(flat) == doctest::Approx(1.0 / 32.0).epsilon(1e-9));
  const DensityMatrix flat_rho = DensityMatrix::from_pure(flat);
  CHECK(boundary_band_mass(flat_rho) == doctest::Approx(1.0 / 32.0).epsilon(1e-9));
}
