#include "bllab/battery.hpp"

#include <cmath>
#include <random>

#include "bllab/errors.hpp"

namespace bllab {

namespace {

// Smooth compact bump: psi(u) = e^{1 - 1/(1-u^2)} for |u| < 1, 0 outside.
double bump(double u) {
  double u2 = u * u;
  return u2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u2)) : 0.0;
}

double dbump(double u) {
  double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  double d = 1.0 - u2;
  return bump(u) * (-2.0 * u / (d * d));
}

struct Poly {
  std::vector<double> c;  // c[k] x^k
  double eval(double x) const {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
  }
  double deval(double x) const {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * x + k * c[k];
    return v;
  }
};

}  // namespace

std::vector<TestFunction> make_battery(const Measure& m,
                                       const BatterySpec& spec) {
  // mt19937_64 raw draws only: the engine sequence is pinned by the
  // standard, unlike the distribution adaptors.
  std::mt19937_64 rng(spec.seed);
  auto unif = [&](double lo, double hi) {
    return uniform_from_bits(rng(), lo, hi);
  };

  const double span = m.half_line() ? m.hi() : std::min(-m.lo(), m.hi());
  const double radius = spec.bump_frac * span;
  const double scale = std::sqrt(std::max(
      integrate(m, [](double x) { return x * x; }).value, 1e-6));

  // |x|^p weights with p > 2 give infinite energy to any slope at the
  // origin; keep those batteries inside the finite-energy class.
  const Potential& pot = m.potential();
  const bool zero_slope_at_origin = pot.kind() == PotentialKind::power &&
                                    pot.param_p() > 2.0 && pot.param_r() == 0.0;

  std::vector<TestFunction> out;
  out.reserve(spec.size);
  for (int j = 0; j < spec.size; ++j) {
    int deg = 1 + static_cast<int>(rng() % spec.max_degree);
    Poly p;
    p.c.resize(deg + 1);
    for (double& ck : p.c) ck = unif(-1.0, 1.0);
    if (zero_slope_at_origin && p.c.size() > 1) p.c[1] = 0.0;
    TestFunction tf;
    tf.label = "poly#" + std::to_string(j) + "(deg=" + std::to_string(deg) + ")";
    tf.f = [p, scale, radius](double x) {
      return p.eval(x / scale) * bump(x / radius);
    };
    tf.df = [p, scale, radius](double x) {
      return p.deval(x / scale) / scale * bump(x / radius) +
             p.eval(x / scale) * dbump(x / radius) / radius;
    };
    out.push_back(std::move(tf));
  }
  return out;
}

std::vector<TestFunction2D> make_battery_2d(const Measure& a, const Measure& b,
                                            const BatterySpec& spec) {
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
  auto unif = [&](double lo, double hi) {
    return uniform_from_bits(rng(), lo, hi);
  };
  const double ra = spec.bump_frac * (a.half_line() ? a.hi() : std::min(-a.lo(), a.hi()));
  const double rb = spec.bump_frac * (b.half_line() ? b.hi() : std::min(-b.lo(), b.hi()));
  const double sa = std::sqrt(integrate(a, [](double x) { return x * x; }).value);
  const double sb = std::sqrt(integrate(b, [](double x) { return x * x; }).value);

  std::vector<TestFunction2D> out;
  const int n = std::max(4, spec.size / 4);
  for (int j = 0; j < n; ++j) {
    int dega = 1 + static_cast<int>(rng() % 3);
    int degb = 1 + static_cast<int>(rng() % 3);
    Poly pa, pb;
    pa.c.resize(dega + 1);
    pb.c.resize(degb + 1);
    for (double& c : pa.c) c = unif(-1.0, 1.0);
    for (double& c : pb.c) c = unif(-1.0, 1.0);
    double lam = unif(-0.4, 0.4);  // exponential coupling strength
    double shift = unif(0.2, 1.2); // keeps candidates away from zero

    TestFunction2D g;
    g.label = "g2d#" + std::to_string(j);
    g.f = [=](double x, double y) {
      return (shift + pa.eval(x / sa) * pb.eval(y / sb) +
              std::exp(lam * (x / sa + y / sb))) *
             bump(x / ra) * bump(y / rb);
    };
    g.fx = [=](double x, double y) {
      double core = shift + pa.eval(x / sa) * pb.eval(y / sb) +
                    std::exp(lam * (x / sa + y / sb));
      double dcore = pa.deval(x / sa) / sa * pb.eval(y / sb) +
                     lam / sa * std::exp(lam * (x / sa + y / sb));
      return dcore * bump(x / ra) * bump(y / rb) +
             core * dbump(x / ra) / ra * bump(y / rb);
    };
    g.fy = [=](double x, double y) {
      double core = shift + pa.eval(x / sa) * pb.eval(y / sb) +
                    std::exp(lam * (x / sa + y / sb));
      double dcore = pa.eval(x / sa) * pb.deval(y / sb) / sb +
                     lam / sb * std::exp(lam * (x / sa + y / sb));
      return dcore * bump(x / ra) * bump(y / rb) +
             core * bump(x / ra) * dbump(y / rb) / rb;
    };
    out.push_back(std::move(g));
  }
  return out;
}

TestFunction hermite(int k) {
  if (k < 0 || k > 10) throw OutOfRange("hermite: k in [0, 10]");
  // He_{k+1} = x He_k - k He_{k-1}
  auto val = [k](double x) {
    double h0 = 1.0, h1 = x;
    if (k == 0) return h0;
    for (int j = 1; j < k; ++j) {
      double h2 = x * h1 - j * h0;
      h0 = h1;
      h1 = h2;
    }
    return h1;
  };
  TestFunction tf;
  tf.f = val;
  tf.df = [k, val](double x) {
    if (k == 0) return 0.0;
    // He_k' = k He_{k-1}
    double h0 = 1.0, h1 = x;
    if (k == 1) return 1.0;
    for (int j = 1; j < k - 1; ++j) {
      double h2 = x * h1 - j * h0;
      h0 = h1;
      h1 = h2;
    }
    return k * h1;
  };
  tf.label = "hermite(" + std::to_string(k) + ")";
  return tf;
}

TestFunction normalized_l2(const Measure& m, const TestFunction& f) {
  double n2 = integrate(m, [&](double x) { double v = f.f(x); return v * v; }).value;
  if (!(n2 > 1e-300)) throw DegenerateFunction("normalized_l2: zero norm");
  double s = 1.0 / std::sqrt(n2);
  TestFunction out;
  out.piecewise = f.piecewise;
  out.label = f.label + "/|.|";
  auto fv = f.f;
  auto fd = f.df;
  out.f = [fv, s](double x) { return s * fv(x); };
  out.df = [fd, s](double x) { return s * fd(x); };
  return out;
}

}  // namespace bllab
