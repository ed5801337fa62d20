#include "oracles.hpp"

#include <cmath>

#include <twotime/numeric.hpp>

namespace twotime::oracle {

Eigen::MatrixXcd dense_propagator(const PositionGrid& grid, double mass, double t) {
  const int n = grid.n_points;
  const std::complex<double> I(0.0, 1.0);

  // Spectral phases exp(-i k_j^2 t / (2m)) in the standard DFT index
  // order: k_j = 2 pi j / (n dx) for j < n/2, shifted down by one period
  // above.
  std::vector<std::complex<double>> phase(n);
  for (int j = 0; j < n; ++j) {
    const int j_signed = (j < n / 2) ? j : j - n;
    const double k = 2.0 * kPi * j_signed / (n * grid.dx);
    phase[j] = std::exp(-I * (k * k * t / (2.0 * mass)));
  }

  // U_ab = (1/n) sum_j exp(i 2 pi j (a-b)/n) phase_j depends only on
  // (a - b) mod n; accumulate each of the n distinct values as a plain
  // sum of complex terms.
  std::vector<std::complex<double>> column(n);
  for (int d = 0; d < n; ++d) {
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      const double angle = 2.0 * kPi * j * d / n;
      acc += std::complex<double>(std::cos(angle), std::sin(angle)) * phase[j];
    }
    column[d] = acc / static_cast<double>(n);
  }

  Eigen::MatrixXcd u(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      u(a, b) = column[((a - b) % n + n) % n];
    }
  }
  return u;
}

double gaussian_interval_probability(double sigma, double p, double mass, double center,
                                     double t, double lo, double hi) {
  const double mean = center + (p / mass) * t;
  const double spread = t / (mass * sigma * sigma);
  const double variance = 0.5 * sigma * sigma * (1.0 + spread * spread);
  const double s = std::sqrt(2.0 * variance);
  return 0.5 * (std::erf((hi - mean) / s) - std::erf((lo - mean) / s));
}

double dense_single_time(const PositionGrid& grid, const Eigen::MatrixXcd& rho,
                         const Eigen::VectorXd& indicator) {
  double acc = 0.0;
  for (int k = 0; k < grid.n_points; ++k) {
    acc += indicator(k) * rho(k, k).real();
  }
  return acc * grid.dx;
}

namespace {

// U X U^dag with the oracle propagator.
Eigen::MatrixXcd conjugate_evolve(const PositionGrid& grid, double mass, double t,
                                  const Eigen::MatrixXcd& kernel) {
  const Eigen::MatrixXcd u = dense_propagator(grid, mass, t);
  return u * kernel * u.adjoint();
}

std::complex<double> weigh_linear(const PositionGrid& grid, const Eigen::VectorXd& w,
                                  const Eigen::MatrixXcd& kernel) {
  std::complex<double> acc(0.0, 0.0);
  for (int k = 0; k < grid.n_points; ++k) {
    acc += w(k) * kernel(k, k);
  }
  return acc * grid.dx;
}

}  // namespace

double dense_standard_two_time(const PositionGrid& grid, double mass,
                               const Eigen::MatrixXcd& rho0, double t1, double t2,
                               const Eigen::VectorXd& first_diag,
                               const Eigen::VectorXd& second_diag) {
  const Eigen::MatrixXcd rho_t1 = conjugate_evolve(grid, mass, t1, rho0);
  const Eigen::MatrixXcd collapsed =
      first_diag.asDiagonal() * rho_t1 * first_diag.asDiagonal();
  const Eigen::MatrixXcd at_t2 = conjugate_evolve(grid, mass, t2 - t1, collapsed);
  return weigh_linear(grid, second_diag, at_t2).real();
}

std::complex<double> dense_decoherence(const PositionGrid& grid, double mass,
                                       const Eigen::MatrixXcd& rho0, double t1, double t2,
                                       const Eigen::VectorXd& diag_a,
                                       const Eigen::VectorXd& diag_b,
                                       const Eigen::VectorXd& second_diag) {
  const Eigen::MatrixXcd rho_t1 = conjugate_evolve(grid, mass, t1, rho0);
  const Eigen::MatrixXcd cross = diag_a.asDiagonal() * rho_t1 * diag_b.asDiagonal();
  const Eigen::MatrixXcd at_t2 = conjugate_evolve(grid, mass, t2 - t1, cross);
  return weigh_linear(grid, second_diag, at_t2);
}

double dense_contextual(const PositionGrid& grid, double mass,
                        const Eigen::MatrixXcd& rho0, double t1, double t2,
                        const std::vector<Eigen::VectorXd>& first_cells,
                        const std::vector<Eigen::VectorXd>& second_cells) {
  // The beta sum enters linearly, so it can be folded into one weight.
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(grid.n_points);
  for (const auto& beta : second_cells) {
    weight += beta;
  }
  const Eigen::MatrixXcd rho_t1 = conjugate_evolve(grid, mass, t1, rho0);
  double acc = 0.0;
  for (const auto& alpha : first_cells) {
    const Eigen::MatrixXcd piece = alpha.asDiagonal() * rho_t1 * alpha.asDiagonal();
    const Eigen::MatrixXcd at_t2 = conjugate_evolve(grid, mass, t2 - t1, piece);
    acc += weigh_linear(grid, weight, at_t2).real();
  }
  return acc;
}

}  // namespace twotime::oracle
