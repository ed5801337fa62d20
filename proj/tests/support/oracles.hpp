#pragma once

// Reference implementations the test suites trust instead of the library
// under test. Everything here is deliberately naive: the propagator is the
// plain DFT definition evaluated with hand-rolled loops (no FFT library),
// single-time probabilities come from the erf of the spread Gaussian, and
// the probability rules are evaluated on explicit dense matrices. Slow,
// obvious, and independent of every code path in core/.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include <twotime/grid.hpp>

namespace twotime::oracle {

// Free-particle propagator exp(-i H t), H = k^2/(2m), on the periodic
// grid, built from the discrete Fourier sum term by term. O(n^2), exact
// modulo rounding; the only thing it shares with the library is the
// spectral wavenumber convention.
Eigen::MatrixXcd dense_propagator(const PositionGrid& grid, double mass, double t);

// Probability that a free Gaussian packet (amplitude width sigma, mean
// momentum p, mass m, centered at `center` at t = 0) is found in [lo, hi)
// at time t. Continuum closed form: |psi|^2 stays Gaussian with mean
// center + (p/m) t and variance (sigma^2/2) (1 + (t/(m sigma^2))^2).
double gaussian_interval_probability(double sigma, double p, double mass, double center,
                                     double t, double lo, double hi);

// Probability rules on explicit matrices. `rho0` is the t = 0 density
// kernel; operator diagonals select outcomes; every trace carries dx.
double dense_single_time(const PositionGrid& grid, const Eigen::MatrixXcd& rho,
                         const Eigen::VectorXd& indicator);

// Tr(Q_j P_i rho(t1) P_i) with Q_j the evolved second-slot weight:
// collapse by first_diag at t1, evolve the kernel to t2, weigh the
// diagonal once with second_diag.
double dense_standard_two_time(const PositionGrid& grid, double mass,
                               const Eigen::MatrixXcd& rho0, double t1, double t2,
                               const Eigen::VectorXd& first_diag,
                               const Eigen::VectorXd& second_diag);

// Interference functional Tr(Q_j P_a rho(t1) P_b) for the off-diagonal
// kernel between two first-time alternatives.
std::complex<double> dense_decoherence(const PositionGrid& grid, double mass,
                                       const Eigen::MatrixXcd& rho0, double t1, double t2,
                                       const Eigen::VectorXd& diag_a,
                                       const Eigen::VectorXd& diag_b,
                                       const Eigen::VectorXd& second_diag);

// Cell-sum rule: sum over first-set cells alpha and second-set cells beta
// of Tr(M_beta U M_alpha rho(t1) M_alpha U^dag), the beta operators
// entering the trace linearly.
double dense_contextual(const PositionGrid& grid, double mass,
                        const Eigen::MatrixXcd& rho0, double t1, double t2,
                        const std::vector<Eigen::VectorXd>& first_cells,
                        const std::vector<Eigen::VectorXd>& second_cells);

}  // namespace twotime::oracle
