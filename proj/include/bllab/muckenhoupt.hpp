#pragma once

#include <string>
#include <vector>

#include "bllab/superbl.hpp"

namespace bllab {

/// Prefix table for the capacity integral int_0^x V''(t) e^{V(t)} dt on the
/// positive side of a symmetric 1D measure.
class CapacityTable {
 public:
  explicit CapacityTable(const Measure& m);
  double integral_to(double x) const;  // throws OutOfSupport outside (0, R]
  double edge() const { return bounds_.back(); }

 private:
  const Measure* m_;
  std::vector<double> bounds_;
  std::vector<double> prefix_;  // prefix_[k] = integral over bounds_[0..k]
};

/// Capa((x, inf), (0, inf)) = 1 / int_0^x V'' e^V dt.
double capacity(const Measure& m, double x);

struct ScanPoint {
  double x = 0.0, value = 0.0;
};

struct MuckenhouptReport {
  double B = 0.0;            // meaningful only when finite == true
  bool finite = true;        // false: sup still growing at the support edge
  bool stabilized = false;   // last refinement moved the sup by < 1e-4 rel
  double x_star = 0.0;
  std::vector<ScanPoint> trace;
};

/// B_s = sup_x mu((x,inf)) / (1 + (s-1) mu((x,inf))) * int_0^x V'' e^V.
MuckenhouptReport B_s(const Measure& m, double s);

/// B = sup_x mu((x,inf)) / beta(1/mu((x,inf))) * int_0^x V'' e^V.
MuckenhouptReport B(const Measure& m, const BetaCurve& beta);

/// B with beta(s) = 1/(1 + log s).
MuckenhouptReport B_log(const Measure& m);

/// Worst increase of s -> s beta(s) on [2, s_max] (should be <= 0).
double sbeta_monotonicity_defect(const BetaCurve& beta, double s_max = 1e6);

/// Gap of the inner-sup reduction at one x:
///   2 mu / beta(1/mu) - sup_{s >= 1} mu / ((1 + (s-1) mu) beta(s)), mu = tail
/// mass at x. Nonnegative when s beta(s) is non-decreasing.
double factor2_gap(const Measure& m, const BetaCurve& beta, double x);

struct SuperBLCheckRow {
  std::string fn;
  double s = 0.0, residual = 0.0;
};

struct SuperBLCheck {
  double min_residual = 0.0;
  SuperBLCheckRow worst;
  std::vector<SuperBLCheckRow> rows;
};

/// Verify int f^2 dmu <= 8 beta(s) energy(f) + s (int |f| dmu)^2 over a
/// battery and an s-grid (the inequality implied by a finite B).
SuperBLCheck verify_super_bl(const Measure& m, const BetaCurve& beta,
                             const std::vector<TestFunction>& battery,
                             const std::vector<double>& s_grid);

}  // namespace bllab
