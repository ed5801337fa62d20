#include "twotime/gaussian_analytic.hpp"

#include <cmath>
#include <limits>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"

namespace twotime {

namespace {

void require_positive(const GaussianExample& ex) {
  if (!(ex.t > 0.0) || !(ex.m > 0.0) || !(ex.delta > 0.0) || !(ex.sigma > 0.0)) {
    throw InvalidArgument("gaussian_analytic", "GaussianExample",
                          "t, m, delta and sigma must all be positive");
  }
}

}  // namespace

double GaussianExample::r() const { return m * delta * delta / t; }

DerivedParams DerivedParams::from_r(double r) {
  DerivedParams d;
  d.r = r;
  d.a = 1.0 + 2.0 * r / sq(1.0 + r);
  d.b = 2.0 * r * sq(1.0 - r) / (1.0 + r * r);
  d.c = r * (1.0 + 2.0 * r - 3.0 * r * r + 2.0 * r * r * r) / (2.0 * sq(1.0 + r * r));
  return d;
}

DerivedParams derived_params(const GaussianExample& ex) {
  require_positive(ex);
  return DerivedParams::from_r(ex.r());
}

double closed_form_point_probability(const GaussianExample& ex, double x, double xp) {
  const DerivedParams d = derived_params(ex);
  const double disp = xp - x - (ex.p / ex.m) * ex.t;
  const double exponent = -(d.a / (4.0 * sq(ex.delta))) * sq(disp);
  return kPi * ex.delta_over_sigma() * (d.r / (1.0 + d.r)) * std::exp(exponent);
}

std::complex<double> closed_form_interference(const GaussianExample& ex, double x,
                                              double xp) {
  const DerivedParams d = derived_params(ex);
  const double disp = xp - x - (ex.p / ex.m) * ex.t;
  const double phase = ex.p * ex.delta + (d.b / ex.delta) * disp;
  return closed_form_point_probability(ex, x, xp) * std::exp(-d.c) *
         std::polar(1.0, phase);
}

double oscillation_period(const GaussianExample& ex) {
  const DerivedParams d = derived_params(ex);
  if (d.b == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi * ex.delta / std::abs(d.b);
}

double CoarseSetSpec::displacement(const GaussianExample& ex) const {
  return x2 - x1 - (ex.p / ex.m) * ex.t;
}

CoarseCalibration calibrate_coarse(const GaussianExample& ex, const CoarseSetSpec& coarse,
                                   double numeric_p_at_zero, double numeric_eps_at_zero) {
  require_positive(ex);
  if (!(coarse.L > 0.0)) {
    throw InvalidArgument("gaussian_analytic", "CoarseSetSpec.L",
                          "set size must be positive");
  }
  CoarseCalibration cal;
  const double shape = coarse.L / ex.sigma;  // estimate value at Delta = 0, cosine aside
  cal.k = numeric_p_at_zero / shape;
  const double cosine = std::cos(ex.p * ex.delta);
  if (std::abs(cosine) < 1e-3) {
    // Calibration point sits at a node of the oscillation; k' cannot be
    // read off there.
    cal.kprime = std::numeric_limits<double>::quiet_NaN();
    cal.kprime_valid = false;
  } else {
    cal.kprime = numeric_eps_at_zero / (shape * cosine);
    cal.kprime_valid = true;
  }
  return cal;
}

CoarseEstimates coarse_set_estimates(const GaussianExample& ex, const CoarseSetSpec& coarse,
                                     const CoarseCalibration& calib) {
  const DerivedParams d = derived_params(ex);
  const double disp = coarse.displacement(ex);
  const double envelope =
      (coarse.L / ex.sigma) * std::exp(-sq(disp) / (4.0 * sq(coarse.L)));
  CoarseEstimates est;
  est.p_est = calib.k * envelope;
  est.eps_est =
      calib.kprime * envelope * std::cos(ex.p * ex.delta + d.b * disp / ex.delta);
  est.ratio = est.p_est != 0.0 ? est.eps_est / est.p_est : 0.0;
  return est;
}

}  // namespace twotime
