#pragma once

#include <functional>
#include <string>

#include "bllab/measures.hpp"

namespace bllab {

/// Scalar test function with value and gradient evaluators.
/// `piecewise` marks functions whose gradient is only defined a.e.
/// (dyadic cutoffs); finite-difference validation skips their kinks.
struct TestFunction {
  std::function<double(double)> f;
  std::function<double(double)> df;
  bool piecewise = false;
  std::string label;
};

/// Worst relative gap between df and centered finite differences of f on a
/// probe grid inside the support.
double gradient_defect(const Measure& m, const TestFunction& tf);

struct DeficitReport {
  double variance = 0.0;
  double energy = 0.0;
  double deficit = 0.0;  // energy - variance, exactly as computed
  double err_est = 0.0;
  double mean = 0.0;
  double barycentre = 0.0;
  double best_theta = 0.0;
  // Distances of the centered function to extremisers; integrals, not roots.
  double l1_best = 0.0, l2_best = 0.0;
  double l1_bary = 0.0, l2_bary = 0.0;
};

/// Var_mu(f) = int f^2 dmu - (int f dmu)^2.
Integral variance(const Measure& m, const TestFunction& f);

/// int (f')^2 / V'' dmu. Throws SingularWeight if V'' < 1e-12 at a node.
Integral bl_energy(const Measure& m, const TestFunction& f);

/// Full deficit report: energy - variance plus extremiser distances.
/// Throws NegativeDeficit if the deficit drops below -10 * err_est.
DeficitReport deficit(const Measure& m, const TestFunction& f);

/// The extremiser f_theta = theta * V' (gradient theta * V'').
TestFunction extremiser(const Measure& m, double theta);

/// int x f(x) dmu.
Integral barycentre(const Measure& m, const TestFunction& f);

/// L^2(mu) projection coefficient of the centered f onto V'.
double best_theta(const Measure& m, const TestFunction& f);

/// int |f~ - theta V'|^p dmu for p in {1, 2}, f~ the centered f.
Integral lp_dist_to_extremiser(const Measure& m, const TestFunction& f,
                               double theta, int p);

/// Ent_mu(g^2) = int g^2 log(g^2 / int g^2 dmu) dmu.
Integral entropy(const Measure& m, const TestFunction& g);

/// int |f~ - f' V'/V''|^2 / (1 + V'^2/V'') dmu, a lower bound for the deficit
/// that vanishes on extremisers.
Integral bgg_bound(const Measure& m, const TestFunction& f);

}  // namespace bllab
