#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bllab/battery.hpp"
#include "bllab/functionals.hpp"

namespace bllab {

/// A strictly increasing phi on (0, inf) with phi(x) -> inf, x phi(x) -> 0
/// at 0, and [0, inf) inside the range. phi_plus means max(phi, 0);
/// phi_plus_inv inverts phi on the set where phi >= 0.
struct PhiFunction {
  std::function<double(double)> phi, dphi;
  std::function<double(double)> phi_plus_inv;  // [0, inf) -> (0, inf)
  double gamma = 1.0;  // sup x phi'(x)
  double M = 0.0;      // submultiplicativity defect: phi(xy) <= M + phi(x) + phi(y)
  std::string label;
};

PhiFunction phi_log();           // phi = log, gamma = 1, M = 0
PhiFunction phi_one_plus_log();  // phi = 1 + log, gamma = 1, M = -1

/// Spot-check the standing assumptions and the (gamma, M) hypotheses on a
/// log grid. Throws HypothesisViolation on failure.
void validate_phi(const PhiFunction& phi);

/// beta: [s0, inf) -> [0, inf), non-increasing; evaluation below s0 extends
/// by the constant beta(s0).
struct BetaCurve {
  double s0 = 1.0;
  std::function<double(double)> value;
  std::string label;
  double operator()(double s) const { return value(s < s0 ? s0 : s); }
};

BetaCurve beta_one();  // beta == 1, s0 = 1 (always admissible)
BetaCurve beta_log();  // beta(s) = 1/(1 + log s), s0 = 1

/// Check non-increasing on a probe grid; returns the worst increase.
double beta_monotonicity_defect(const BetaCurve& beta, double s_max = 1e6);

/// RHS - LHS of int g^2 dmu <= beta(s) energy(g) + s (int |g| dmu)^2.
double super_bl_residual(const Measure& m, const TestFunction& g, double s,
                         const BetaCurve& beta);

struct PhiToBetaResult {
  BetaCurve beta;    // beta(s) = 4 C_phi / phi_plus(s/4), s >= s0
  double D = 0.0;    // phi(1) + sup_{phi < 0} x (-phi(x))
  double s0 = 0.0;   // 4 phi_plus_inv(2D)
  double s0_alt = 0.0;  // 4 phi_plus_inv(D); a second normalisation of the
                        // same threshold that appears in the literature
};

/// Additive-phi constant -> super-BL curve.
PhiToBetaResult phi_to_beta(const PhiFunction& phi, double C_phi);

/// Super-BL curve -> additive-phi constant, for phi_ext extending 1/beta:
///   C_phi = 8/(sqrt2 - 1)^2 (1 + beta(s0)(phi(8) + M)) + 2 gamma (1 + sqrt(8 s0))^2.
/// Throws HypothesisViolation if phi_ext fails its hypotheses or does not
/// match 1/beta on [s0, inf).
double beta_to_phi(const BetaCurve& beta, const PhiFunction& phi_ext);

/// Super-Poincare -> super-BL under 0 < V'' <= Lambda: beta = Lambda beta0.
BetaCurve lambda_transfer(double Lambda, const BetaCurve& beta0);

/// sup of V'' over the support (the Lambda of the transfer).
double sup_d2V(const Measure& m);

/// Cutoffs interpolating 0 on {f^2 <= 2^{n-1}} and 1 on {f^2 >= 2^n}:
///   f_n = min(1, ((|f| - sqrt(2^{n-1})) / (sqrt(2^n) - sqrt(2^{n-1})))_+).
std::vector<TestFunction> dyadic_cutoffs(const TestFunction& f, int n_lo,
                                         int n_hi);

struct ProfilePoint {
  double s = 0.0;
  double beta_hat = 0.0;
  std::string witness;
};

struct ProfileConfig {
  bool use_cutoffs = true;
  int cutoff_lo = 0, cutoff_hi = 8;
  bool use_eigen = true;
  int eigen_mesh = 257;
  int eigen_iters = 2;
};

/// Empirical lower bound beta_hat(s) = max over the search family of
/// (int g^2 - s (int |g|)^2) / energy(g), floored at 0, then made
/// non-increasing by an isotonic pass from the right.
std::vector<ProfilePoint> beta_profile(const Measure& m,
                                       const std::vector<double>& s_grid,
                                       const std::vector<TestFunction>& battery,
                                       const ProfileConfig& cfg = {});

/// Additive-phi ratio of one function: numerator over energy, floored at 0.
/// Returns nullopt when the energy is below the constant-exclusion floor.
/// The level overload evaluates on a fresh rule of that level, for
/// like-for-like comparisons with the 2D route.
std::optional<double> phi_ratio(const Measure& m, const PhiFunction& phi,
                                const TestFunction& g);
std::optional<double> phi_ratio(const Measure& m, const PhiFunction& phi,
                                const TestFunction& g, int level);

struct TensorReport {
  double worst_2d = 0.0;
  double worst_1d_a = 0.0;  // over slices of the 2D family and the 1D battery
  double worst_1d_b = 0.0;  // over marginals of the 2D family and the battery
  std::string witness_2d;
};

/// 2D ratio of one candidate at the given per-axis quadrature level.
std::optional<double> phi_ratio_2d(const Measure& a, const Measure& b,
                                   const PhiFunction& phi,
                                   const TestFunction2D& g, int level);

/// Worst additive-phi ratio over a 2D family against the product a x b,
/// together with the induced 1D worst ratios (slices, marginals, battery).
TensorReport tensor_check(const Measure& a, const Measure& b,
                          const PhiFunction& phi,
                          const std::vector<TestFunction2D>& family,
                          const std::vector<TestFunction>& battery_a,
                          const std::vector<TestFunction>& battery_b,
                          int level = 6);

/// Worst Ent(f^2)/energy(f) over a family (constants excluded).
double entropic_check(const Measure& m, const std::vector<TestFunction>& family);

/// RHS - LHS of Ent(f^2) <= 2 Var(f) + Ent(f~^2), f~ = f - int f dmu.
double rothaus_residual(const Measure& m, const TestFunction& f);

}  // namespace bllab
