#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace bllab {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};

/// Cached Gauss-Legendre rule (Newton iteration on the Legendre recurrence).
const GaussRule& gauss_legendre(int n);

/// Neumaier-compensated accumulator. All reductions in the library go
/// through this so results do not depend on summation batching.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

struct MaxResult {
  double x = 0.0, value = 0.0;
};

/// Golden-section maximisation on [a, b]; returns the best evaluated point.
MaxResult golden_max(const std::function<double(double)>& f, double a, double b,
                     int iters = 80);

/// Solve f(x) = target by bisection on [lo, hi]; f must be monotone there.
double bisect(const std::function<double(double)>& f, double target, double lo,
              double hi, int iters = 200);

/// n log-spaced points from a to b (inclusive), a, b > 0.
std::vector<double> logspace(double a, double b, int n);

/// FNV-1a 64-bit hash, used to stamp artifacts with their configuration.
std::uint64_t fnv1a64(std::string_view s);

/// Deterministic uniform double in [lo, hi) from a raw 64-bit draw.
inline double uniform_from_bits(std::uint64_t bits, double lo, double hi) {
  double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

}  // namespace bllab
