#include "bllab/stability.hpp"

#include <cmath>

#include "bllab/errors.hpp"

namespace bllab {

StabilityConstants stability_constants(const StabilityInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 1.0))
    throw OutOfRange("delta must lie strictly inside (0, 1)");
  if (!(in.C0 > 0.0 && in.C1 > 0.0))
    throw OutOfRange("C0 and C1 must be positive");
  if (!(in.m2 >= 0.0 && in.m1V >= 0.0) || !std::isfinite(in.m2) ||
      !std::isfinite(in.m1V))
    throw OutOfRange("moments must be finite and nonnegative");
  StabilityConstants c;
  c.C2 = (in.delta + in.C0 * in.C1 * in.C1) / (1.0 - in.delta);
  c.C3 = in.C1 + std::sqrt(c.C2 * in.m2) * in.m1V;
  c.C4 = (in.delta + in.C0 * c.C3 * c.C3) / (1.0 - in.delta);
  return c;
}

StabilityInputs make_inputs(const Measure& m, double delta, double C0,
                            double C1) {
  StabilityInputs in;
  in.delta = delta;
  in.C0 = C0;
  in.C1 = C1;
  in.m2 = integrate(m, [](double x) { return x * x; }).value;
  const Potential& pot = m.potential();
  in.m1V = integrate(m, [&](double x) { return std::abs(pot.dV(x)); }).value;
  return in;
}

double extremiser_shift_residual(const Measure& m, const TestFunction& f,
                                 double theta) {
  const Potential& pot = m.potential();
  const double mean = integrate(m, f.f).value;
  auto fc = [&](double x) { return f.f(x) - mean; };

  Integral en = bl_energy(m, f);
  Integral var = variance(m, f);
  const double eps = en.value - var.value;

  Integral lhs = integrate(m, [&](double x) {
    double d2 = pot.d2V(x);
    double g = f.df(x) - theta * d2;
    return g * g / d2;
  });
  Integral g2 = integrate(m, [&](double x) {
    double g = fc(x) - theta * pot.dV(x);
    return g * g;
  });
  Integral g1 = integrate(m, [&](double x) { return fc(x) - theta * pot.dV(x); });
  double rhs = g2.value - g1.value * g1.value + eps;
  return std::abs(lhs.value - rhs) / std::max(1.0, std::abs(lhs.value));
}

namespace {

// Residual of Var(g) <= delta * energy(g) + C0 (int |g|)^2 at a specific g.
double hypothesis_residual(const Measure& m, const Potential& pot,
                           const std::function<double(double)>& g,
                           const std::function<double(double)>& dg,
                           double delta, double C0) {
  double g2 = integrate(m, [&](double x) { double v = g(x); return v * v; }).value;
  double g1 = integrate(m, g).value;
  double ga = integrate(m, [&](double x) { return std::abs(g(x)); }).value;
  double en = integrate(m, [&](double x) {
                double d = dg(x);
                return d * d / pot.d2V(x);
              }).value;
  double var = g2 - g1 * g1;
  return delta * en + C0 * ga * ga - var;
}

}  // namespace

StabilityReport verify_stability(const Measure& m, const TestFunction& f,
                                 const StabilityInputs& in) {
  const Potential& pot = m.potential();
  StabilityReport rep;

  Integral en = bl_energy(m, f);
  Integral var = variance(m, f);
  rep.eps = en.value - var.value;
  rep.err_eps = en.err + var.err;
  if (rep.eps < 100.0 * rep.err_eps)
    throw ZeroDeficit("deficit indistinguishable from zero; ratios undefined");

  const double mean = integrate(m, f.f).value;
  rep.theta_hat = best_theta(m, f);
  rep.theta_star =
      integrate(m, [&](double x) { return x * (f.f(x) - mean); }).value;
  rep.consts = stability_constants(in);

  rep.lhs_l2_hat = lp_dist_to_extremiser(m, f, rep.theta_hat, 2).value;
  rep.lhs_l1_star = lp_dist_to_extremiser(m, f, rep.theta_star, 1).value;
  rep.lhs_l2_star = lp_dist_to_extremiser(m, f, rep.theta_star, 2).value;

  rep.rhs_l2_hat = rep.consts.C2 * rep.eps;
  rep.rhs_l1_star = rep.consts.C3 * std::sqrt(rep.eps);
  rep.rhs_l2_star = rep.consts.C4 * rep.eps;

  rep.margin_l2_hat = rep.rhs_l2_hat - rep.lhs_l2_hat;
  rep.margin_l1_star = rep.rhs_l1_star - rep.lhs_l1_star;
  rep.margin_l2_star = rep.rhs_l2_star - rep.lhs_l2_star;

  for (double theta : {rep.theta_hat, rep.theta_star}) {
    auto g = [&, theta](double x) { return f.f(x) - mean - theta * pot.dV(x); };
    auto dg = [&, theta](double x) { return f.df(x) - theta * pot.d2V(x); };
    double r = hypothesis_residual(m, pot, g, dg, in.delta, in.C0);
    if (theta == rep.theta_hat)
      rep.hyp_residual_hat = r;
    else
      rep.hyp_residual_star = r;
  }
  return rep;
}

C1Fit fit_c1(const Measure& m, const std::vector<TestFunction>& battery) {
  if (battery.empty()) throw EmptyFamily("fit_c1: empty battery");
  C1Fit fit;
  for (const auto& f : battery) {
    Integral en = bl_energy(m, f);
    Integral var = variance(m, f);
    double eps = en.value - var.value;
    if (eps < 100.0 * (en.err + var.err)) continue;  // extremiser-like, skip
    double theta = best_theta(m, f);
    double l1 = lp_dist_to_extremiser(m, f, theta, 1).value;
    double ratio = l1 / std::sqrt(eps);
    fit.ratios.emplace_back(f.label, ratio);
    fit.c1_hat = std::max(fit.c1_hat, ratio);
    ++fit.used;
  }
  if (fit.used == 0)
    throw ZeroDeficit("fit_c1: every battery function is an extremiser");
  return fit;
}

}  // namespace bllab
