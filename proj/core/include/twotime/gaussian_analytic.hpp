#pragma once

#include <complex>

namespace twotime {

// Free Gaussian wave packet probed by Gaussian-smeared resolution-delta
// operators: the one arrangement with closed-form answers, kept as an
// independent cross-check of the numeric engine. hbar = 1 throughout.
struct GaussianExample {
  double sigma = 1.0;  // packet width (amplitude Gaussian)
  double p = 0.0;      // mean momentum
  double m = 1.0;      // mass
  double delta = 0.1;  // device resolution
  double t = 1.0;      // lag between the two measurements

  // Time-of-flight phase-space parameter m*delta^2/t: small r means the
  // packet spreads far between clicks, large r means it barely moves.
  double r() const;
  double delta_over_sigma() const { return delta / sigma; }
  // The closed forms assume a device much finer than the packet.
  bool regime_valid() const { return delta_over_sigma() <= 0.1; }
};

// Dimensionless shape parameters of the closed forms. All are rational
// functions of r alone.
struct DerivedParams {
  double r = 0.0;
  double a = 1.0;  // Gaussian width factor; in (1, 1.5] for r > 0
  double b = 0.0;  // phase slope of the interference term
  double c = 0.0;  // log-modulus suppression of the interference term

  static DerivedParams from_r(double r);
};

// Exact evaluation of the printed formulas. InvalidArgument unless
// t > 0, m > 0, delta > 0.
DerivedParams derived_params(const GaussianExample& ex);

// Joint probability density estimate for minimal cells at x (first
// click, t=0) and x' (second click, t):
//   pi * (delta/sigma) * (r/(1+r)) * exp(-(a/(4 delta^2)) * D^2),
// with D = x' - x - (p/m) t the displacement from the classical path.
// An approximation under the regime flags; evaluated verbatim either way.
double closed_form_point_probability(const GaussianExample& ex, double x, double xp);

// Interference between the half-cells at x +- delta/2 feeding the cell
// at x': p * exp(-c) * exp(i (p delta + (b/delta) D)).
std::complex<double> closed_form_interference(const GaussianExample& ex, double x,
                                              double xp);

// Displacement period of the interference oscillation, 2 pi delta / |b|
// (infinity when b vanishes, i.e. at r = 1 and in the r -> 0 limit).
double oscillation_period(const GaussianExample& ex);

// Two coarse sets of common size L centered at x1 (first time) and x2
// (second time), the setting of the order-of-magnitude estimates.
struct CoarseSetSpec {
  double x1 = 0.0;
  double x2 = 0.0;
  double L = 1.0;

  // Delta = x2 - x1 - (p/m) t, distance of x2 from the classically
  // transported x1.
  double displacement(const GaussianExample& ex) const;
  // Regime flags of the estimates: set size well above the device
  // resolution, and small against the packet.
  bool size_above_resolution(const GaussianExample& ex) const { return L >= 10.0 * ex.delta; }
  bool size_below_packet(const GaussianExample& ex) const { return L <= 0.3 * ex.sigma; }
};

// The estimates carry undetermined order-unity prefactors k and k'. They
// are calibrated once per arrangement from a numeric evaluation at
// Delta = 0 and reported, never guessed.
struct CoarseCalibration {
  double k = 1.0;
  double kprime = 1.0;
  // False when the cosine at the calibration point is too close to zero
  // for k' to be extracted (|cos(p delta)| < 1e-3); kprime is NaN then.
  bool kprime_valid = true;
};

CoarseCalibration calibrate_coarse(const GaussianExample& ex, const CoarseSetSpec& coarse,
                                   double numeric_p_at_zero, double numeric_eps_at_zero);

struct CoarseEstimates {
  double p_est = 0.0;
  double eps_est = 0.0;
  double ratio = 0.0;  // eps_est / p_est (0 when p_est underflows)
};

// p ~ k (L/sigma) exp(-Delta^2/(4 L^2)) and
// eps ~ k' (L/sigma) exp(-Delta^2/(4 L^2)) cos(p delta + b Delta / delta).
CoarseEstimates coarse_set_estimates(const GaussianExample& ex, const CoarseSetSpec& coarse,
                                     const CoarseCalibration& calib = {});

}  // namespace twotime
