#pragma once

#include <cstdint>
#include <vector>

namespace twotime {

// Chi-square goodness-of-fit of observed category counts against model
// probabilities.
struct ChiSquareResult {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins_used = 0;    // categories entering the statistic (after pooling)
  int bins_pooled = 0;  // low-expectation categories folded into one bin
};

// Pools categories whose expected count falls below `min_expected`
// (classic rule of thumb for chi-square validity) into a single bin.
// Model probabilities are renormalized over the categories provided.
// dof = bins_used - 1. Throws InsufficientData when fewer than two bins
// survive or the total count is zero.
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::vector<double>& probabilities,
                               double min_expected = 5.0);

// Half-width of the normal-approximation binomial confidence interval,
// z * sqrt(p(1-p)/n).
double binomial_half_width(double p_hat, std::int64_t n, double z = 1.96);

// Standardized deviation of an empirical rate from a model probability
// under the binomial null: (p_hat - p) / sqrt(p(1-p)/n). Returns 0 when
// the standard error vanishes and the rates agree, +-inf otherwise.
double z_score(double p_hat, double p_model, std::int64_t n);

}  // namespace twotime
