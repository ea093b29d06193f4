#pragma once

#include <cstdint>
#include <vector>

#include "bllab/functionals.hpp"

namespace bllab {

struct TestFunction2D {
  std::function<double(double, double)> f, fx, fy;
  std::string label;
};

/// Deterministic battery: pseudorandom polynomials of degree <= max_degree
/// multiplied by a smooth compact bump scaled to the support. A fixed seed
/// reproduces the battery bit-for-bit.
struct BatterySpec {
  std::uint64_t seed = 12345;
  int size = 64;
  int max_degree = 6;
  double bump_frac = 0.9;  // bump radius as a fraction of the support
};

std::vector<TestFunction> make_battery(const Measure& m,
                                       const BatterySpec& spec = {});

/// 2D battery for tensor checks: products of 1D members plus coupled
/// exponential/polynomial terms under a 2D bump.
std::vector<TestFunction2D> make_battery_2d(const Measure& a, const Measure& b,
                                            const BatterySpec& spec = {});

/// Probabilists' Hermite polynomial H_k as a TestFunction (k <= 10).
TestFunction hermite(int k);

/// Scale f to unit L^2(mu) norm. Throws DegenerateFunction on ~zero norm.
TestFunction normalized_l2(const Measure& m, const TestFunction& f);

}  // namespace bllab
