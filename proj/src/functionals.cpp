#include "bllab/functionals.hpp"

#include <cmath>

#include "bllab/errors.hpp"

namespace bllab {

namespace {

constexpr double kWeightFloor = 1e-12;

double inv_d2V(const Potential& pot, double x) {
  double d2 = pot.d2V(x);
  if (!(d2 >= kWeightFloor))
    throw SingularWeight("V'' below floor at x = " + std::to_string(x));
  return 1.0 / d2;
}

double x_log_x(double t) { return t > 1e-300 ? t * std::log(t) : 0.0; }

}  // namespace

double gradient_defect(const Measure& m, const TestFunction& tf) {
  const double lo = m.lo(), hi = m.hi();
  double worst = 0.0;
  const int n = 101;
  for (int i = 0; i < n; ++i) {
    double x = lo + (i + 0.37) * (hi - lo) / n;
    double h = 3e-6 * std::max(1.0, std::abs(x));
    double fd = (tf.f(x + h) - tf.f(x - h)) / (2.0 * h);
    double g = tf.df(x);
    worst = std::max(worst,
                     std::abs(fd - g) / std::max({1.0, std::abs(fd), std::abs(g)}));
  }
  return worst;
}

Integral variance(const Measure& m, const TestFunction& f) {
  Integral s2 = integrate(m, [&](double x) { double v = f.f(x); return v * v; });
  Integral s1 = integrate(m, f.f);
  double v = s2.value - s1.value * s1.value;
  return {v, s2.err + 2.0 * std::abs(s1.value) * s1.err};
}

Integral bl_energy(const Measure& m, const TestFunction& f) {
  const Potential& pot = m.potential();
  return integrate(m, [&](double x) {
    double g = f.df(x);
    return g * g * inv_d2V(pot, x);
  });
}

TestFunction extremiser(const Measure& m, double theta) {
  const Potential* pot = &m.potential();
  TestFunction tf;
  tf.f = [pot, theta](double x) { return theta * pot->dV(x); };
  tf.df = [pot, theta](double x) { return theta * pot->d2V(x); };
  tf.label = "extremiser(theta=" + std::to_string(theta) + ")";
  return tf;
}

Integral barycentre(const Measure& m, const TestFunction& f) {
  return integrate(m, [&](double x) { return x * f.f(x); });
}

double best_theta(const Measure& m, const TestFunction& f) {
  const Potential& pot = m.potential();
  Integral gram = integrate(m, [&](double x) { double d = pot.dV(x); return d * d; });
  if (!(gram.value > 1e-14))
    throw SingularGram("Gram matrix of V' is numerically singular");
  double mean = integrate(m, f.f).value;
  double rhs = integrate(m, [&](double x) { return pot.dV(x) * (f.f(x) - mean); }).value;
  return rhs / gram.value;
}

Integral lp_dist_to_extremiser(const Measure& m, const TestFunction& f,
                               double theta, int p) {
  if (p != 1 && p != 2) throw OutOfRange("lp_dist: p must be 1 or 2");
  const Potential& pot = m.potential();
  double mean = integrate(m, f.f).value;
  return integrate(m, [&](double x) {
    double d = f.f(x) - mean - theta * pot.dV(x);
    return p == 1 ? std::abs(d) : d * d;
  });
}

DeficitReport deficit(const Measure& m, const TestFunction& f) {
  DeficitReport rep;
  Integral var = variance(m, f);
  Integral en = bl_energy(m, f);
  rep.variance = var.value;
  rep.energy = en.value;
  rep.deficit = en.value - var.value;
  rep.err_est = en.err + var.err;
  if (rep.deficit < -10.0 * rep.err_est)
    throw NegativeDeficit("deficit " + std::to_string(rep.deficit) +
                          " below -10 * err_est");
  rep.mean = integrate(m, f.f).value;
  rep.barycentre =
      integrate(m, [&](double x) { return x * (f.f(x) - rep.mean); }).value;
  rep.best_theta = best_theta(m, f);
  rep.l1_best = lp_dist_to_extremiser(m, f, rep.best_theta, 1).value;
  rep.l2_best = lp_dist_to_extremiser(m, f, rep.best_theta, 2).value;
  rep.l1_bary = lp_dist_to_extremiser(m, f, rep.barycentre, 1).value;
  rep.l2_bary = lp_dist_to_extremiser(m, f, rep.barycentre, 2).value;
  return rep;
}

Integral entropy(const Measure& m, const TestFunction& g) {
  Integral a = integrate(m, [&](double x) { double v = g.f(x); return v * v; });
  if (!(a.value > 1e-300)) throw DegenerateFunction("int g^2 dmu vanishes");
  Integral glg =
      integrate(m, [&](double x) { double v = g.f(x); return x_log_x(v * v); });
  double v = glg.value - x_log_x(a.value);
  return {v, glg.err + a.err * (std::abs(std::log(a.value)) + 1.0)};
}

Integral bgg_bound(const Measure& m, const TestFunction& f) {
  const Potential& pot = m.potential();
  double mean = integrate(m, f.f).value;
  return integrate(m, [&](double x) {
    double w = inv_d2V(pot, x);
    double dv = pot.dV(x);
    double num = f.f(x) - mean - f.df(x) * w * dv;
    return num * num / (1.0 + dv * dv * w);
  });
}

}  // namespace bllab
