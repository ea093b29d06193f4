#pragma once

#include <string>
#include <vector>

#include "bllab/functionals.hpp"

namespace bllab {

struct StabilityInputs {
  double delta = 0.5;  // in (0, 1)
  double C0 = 1.0;
  double C1 = 1.0;
  double m2 = 0.0;   // E_mu |x|^2
  double m1V = 0.0;  // E_mu |V'|
};

struct StabilityConstants {
  double C2 = 0.0;  // (delta + C0 C1^2) / (1 - delta)
  double C3 = 0.0;  // C1 + sqrt(C2 m2) m1V
  double C4 = 0.0;  // (delta + C0 C3^2) / (1 - delta)
};

/// Evaluate the constant chain exactly. Throws OutOfRange for delta
/// outside (0, 1) or non-positive C0/moments.
StabilityConstants stability_constants(const StabilityInputs& in);

/// Fill the measure moments m2 and m1V of the inputs.
StabilityInputs make_inputs(const Measure& m, double delta, double C0, double C1);

/// Relative defect of the exact identity
///   int (f' - theta V'')^2 / V'' dmu = Var(f - theta V') + deficit(f)
/// for centered f. Exact in the continuum, so the returned value is a pure
/// quadrature-consistency probe.
double extremiser_shift_residual(const Measure& m, const TestFunction& f,
                                 double theta);

struct StabilityReport {
  double eps = 0.0, err_eps = 0.0;
  double theta_hat = 0.0, theta_star = 0.0;
  StabilityConstants consts;
  double lhs_l2_hat = 0.0, rhs_l2_hat = 0.0;    // int |f - f_theta_hat|^2 <= C2 eps
  double lhs_l1_star = 0.0, rhs_l1_star = 0.0;  // int |f - f_theta*|    <= C3 sqrt(eps)
  double lhs_l2_star = 0.0, rhs_l2_star = 0.0;  // int |f - f_theta*|^2  <= C4 eps
  double margin_l2_hat = 0.0, margin_l1_star = 0.0, margin_l2_star = 0.0;
  // Residuals of the hypothesis Var(g) <= delta * energy(g) + C0 (int|g|)^2
  // at the two witnesses g = f - f_theta_hat and g = f - f_theta*.
  double hyp_residual_hat = 0.0, hyp_residual_star = 0.0;
};

/// Verify the stability chain on one function. Throws ZeroDeficit when
/// eps < 100 * err_est (the function is an extremiser to quadrature noise).
StabilityReport verify_stability(const Measure& m, const TestFunction& f,
                                 const StabilityInputs& in);

struct C1Fit {
  double c1_hat = 0.0;
  int used = 0;  // battery functions with resolvable deficit
  std::vector<std::pair<std::string, double>> ratios;
};

/// Smallest empirical C1 over a battery: sup int|f - f_theta_hat| / sqrt(eps).
C1Fit fit_c1(const Measure& m, const std::vector<TestFunction>& battery);

}  // namespace bllab
