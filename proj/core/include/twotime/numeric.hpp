#pragma once

#include <cmath>
#include <cstddef>

namespace twotime {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Compensated (Neumaier) summation. Cell sums must be order-independent
// down to round-off so that probability additivity identities hold at
// machine-epsilon level.
class NeumaierSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double sq(double x) { return x * x; }

// Clamp a computed probability to [0, 1]. Tiny negative round-off
// (> -1e-10) is expected and silently clamped; anything worse is the
// caller's responsibility to have screened.
inline double clamp_probability(double p) {
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace twotime
