#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bllab/quad.hpp"

namespace bllab {

enum class PotentialKind { gaussian, power, custom };

/// A strictly convex C^2 potential on the line with evaluators for V, V', V''.
///
/// Built-in kinds:
///   gaussian(a):  V(x) = a x^2 / 2,          a > 0
///   power(p, r):  V(x) = (x^2 + r^2)^{p/2},  p > 1, r >= 0
///
/// power with r > 0 is the C^2 regularisation of |x|^p; with r = 0 it is
/// |x|^p itself, whose second derivative vanishes (p > 2) or blows up
/// (p < 2) at the origin only. Construction probes a 101-point grid and
/// cross-checks the three evaluators by centered finite differences.
class Potential {
 public:
  static Potential gaussian(double a);
  static Potential power(double p, double r = 0.0);
  static Potential custom(std::function<double(double)> V,
                          std::function<double(double)> dV,
                          std::function<double(double)> d2V, bool symmetric);

  double V(double x) const { return V_(x); }
  double dV(double x) const { return dV_(x); }
  double d2V(double x) const { return d2V_(x); }

  PotentialKind kind() const { return kind_; }
  bool symmetric() const { return symmetric_; }
  double argmin() const { return xmin_; }
  double param_a() const { return a_; }
  double param_p() const { return p_; }
  double param_r() const { return r_; }
  std::string describe() const;

 private:
  Potential() = default;
  void locate_min();
  void validate() const;  // throws NonConvex / InconsistentDerivatives

  PotentialKind kind_ = PotentialKind::custom;
  double a_ = 0.0, p_ = 0.0, r_ = 0.0;
  bool symmetric_ = false;
  double xmin_ = 0.0;
  std::function<double(double)> V_, dV_, d2V_;
};

/// A normalised log-concave measure e^{-V} dx / Z on a truncated support.
///
/// The support is cut where V exceeds min V + 40 (about 4e-18 relative tail
/// mass), which dominates every tolerance used downstream. The half-line
/// variant restricts a symmetric potential to [0, R].
class Measure {
 public:
  static constexpr int kDefaultLevel = 8;

  Measure(Potential pot, double tol = 1e-12, bool half_line = false,
          int level = kDefaultLevel);

  const Potential& potential() const { return pot_; }
  double Z() const { return Z_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool half_line() const { return half_line_; }
  bool symmetric() const { return pot_.symmetric() && !half_line_; }
  double truncation_tol() const { return tol_; }
  int level() const { return rule_.level; }
  std::string describe() const;

  const Rule& rule() const { return rule_; }
  Rule make_rule(int level) const;

  /// Density e^{-V(x)}/Z on the support, 0 outside.
  double density(double x) const;

  /// mu((x, infinity)); includes the analytic beyond-support remainder.
  double tail_mass(double x) const;

  /// Unnormalised beyond-support tail bounds e^{-V(R)}/|V'(R)|.
  double tail_upper_right() const { return tail_right_; }
  double tail_upper_left() const { return tail_left_; }

 private:
  Potential pot_;
  double tol_ = 1e-12;
  bool half_line_ = false;
  double lo_ = 0.0, hi_ = 0.0;
  double Z_ = 0.0;
  double tail_right_ = 0.0, tail_left_ = 0.0;
  Rule rule_;
};

/// Spec-style constructor name.
inline Measure normalize(const Potential& p, double tol = 1e-12,
                         bool half_line = false,
                         int level = Measure::kDefaultLevel) {
  return Measure(p, tol, half_line, level);
}

/// Structural product of 1D factors; dimension capped at 3.
class ProductMeasure {
 public:
  explicit ProductMeasure(std::vector<Measure> factors);
  int dim() const { return static_cast<int>(factors_.size()); }
  const Measure& factor(int i) const { return factors_[i]; }

 private:
  std::vector<Measure> factors_;
};

}  // namespace bllab
