#include "twotime/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"

namespace twotime {

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::vector<double>& probabilities,
                               double min_expected) {
  if (observed.size() != probabilities.size()) {
    throw InvalidArgument("stats", "chi_square_gof",
                          "observed and probability lists differ in length");
  }
  std::int64_t total = 0;
  for (std::int64_t c : observed) {
    if (c < 0) throw InvalidArgument("stats", "chi_square_gof", "negative count");
    total += c;
  }
  if (total == 0) {
    throw InsufficientData("stats", "chi_square_gof", "no observations");
  }

  // Renormalize the model over the categories supplied (grid truncation
  // can leave the listed probabilities summing slightly below one).
  NeumaierSum psum;
  for (double p : probabilities) {
    if (p < 0.0) throw InvalidArgument("stats", "chi_square_gof", "negative probability");
    psum.add(p);
  }
  const double norm = psum.value();
  if (!(norm > 0.0)) {
    throw InvalidArgument("stats", "chi_square_gof", "model probabilities sum to zero");
  }

  ChiSquareResult result;
  NeumaierSum chi2;
  std::int64_t pooled_observed = 0;
  double pooled_expected = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = static_cast<double>(total) * probabilities[i] / norm;
    if (expected < min_expected) {
      pooled_observed += observed[i];
      pooled_expected += expected;
      ++result.bins_pooled;
      continue;
    }
    const double diff = static_cast<double>(observed[i]) - expected;
    chi2.add(diff * diff / expected);
    ++result.bins_used;
  }
  if (pooled_expected > 0.0) {
    const double diff = static_cast<double>(pooled_observed) - pooled_expected;
    chi2.add(diff * diff / pooled_expected);
    ++result.bins_used;
  }
  if (result.bins_used < 2) {
    throw InsufficientData("stats", "chi_square_gof",
                           "fewer than two usable categories after pooling");
  }
  result.chi2 = chi2.value();
  result.dof = result.bins_used - 1;
  result.p_value = boost::math::gamma_q(result.dof / 2.0, result.chi2 / 2.0);
  return result;
}

double binomial_half_width(double p_hat, std::int64_t n, double z) {
  if (n <= 0) {
    throw InvalidArgument("stats", "binomial_half_width", "sample size must be positive");
  }
  const double v = p_hat * (1.0 - p_hat) / static_cast<double>(n);
  return z * std::sqrt(v > 0.0 ? v : 0.0);
}

double z_score(double p_hat, double p_model, std::int64_t n) {
  if (n <= 0) {
    throw InvalidArgument("stats", "z_score", "sample size must be positive");
  }
  const double v = p_model * (1.0 - p_model) / static_cast<double>(n);
  if (v <= 0.0) {
    if (p_hat == p_model) return 0.0;
    return p_hat > p_model ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
  }
  return (p_hat - p_model) / std::sqrt(v);
}

}  // namespace twotime
