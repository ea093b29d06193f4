#include "bllab/superbl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bllab/errors.hpp"
#include "bllab/spectral.hpp"

namespace bllab {

namespace {

constexpr double kEnergyFloor = 1e-12;  // constant-function exclusion
constexpr double kInf = std::numeric_limits<double>::infinity();

double phi_of(const PhiFunction& p, double x) { return p.phi(x); }

double Phi_safe(const PhiFunction& p, double t) {
  return t > 1e-300 ? t * p.phi(t) : 0.0;
}

}  // namespace

PhiFunction phi_log() {
  PhiFunction p;
  p.phi = [](double x) { return std::log(x); };
  p.dphi = [](double x) { return 1.0 / x; };
  p.phi_plus_inv = [](double t) { return std::exp(t); };
  p.gamma = 1.0;
  p.M = 0.0;
  p.label = "log";
  return p;
}

PhiFunction phi_one_plus_log() {
  PhiFunction p;
  p.phi = [](double x) { return 1.0 + std::log(x); };
  p.dphi = [](double x) { return 1.0 / x; };
  p.phi_plus_inv = [](double t) { return std::exp(t - 1.0); };
  p.gamma = 1.0;
  p.M = -1.0;
  p.label = "1+log";
  return p;
}

void validate_phi(const PhiFunction& p) {
  const auto grid = logspace(1e-8, 1e8, 81);
  double prev = -kInf;
  for (double x : grid) {
    double v = phi_of(p, x);
    if (!(v > prev)) throw HypothesisViolation("phi not strictly increasing");
    prev = v;

    if (v >= 0.0) {
      double back = p.phi_plus_inv(v);
      if (std::abs(back - x) > 1e-10 * std::max(1.0, x))
        throw HypothesisViolation("phi_plus_inv does not invert phi");
    }
    if (x * p.dphi(x) > p.gamma * (1.0 + 1e-9) + 1e-12)
      throw HypothesisViolation("x phi'(x) exceeds gamma");

    // Concavity via second differences on a local scale.
    double h = 1e-4 * x;
    double dd = p.phi(x + h) - 2.0 * v + p.phi(x - h);
    if (dd > 1e-9 * std::max(1.0, std::abs(v)))
      throw HypothesisViolation("phi not concave");
  }
  if (std::abs(1e-12 * phi_of(p, 1e-12)) > 1e-6)
    throw HypothesisViolation("x phi(x) does not vanish at 0");
  if (p.M < -phi_of(p, 8.0) - 1e-12)
    throw HypothesisViolation("M < -phi(8)");
  for (double x : logspace(1e-4, 1e4, 17))
    for (double y : logspace(1e-4, 1e4, 17))
      if (phi_of(p, x * y) > p.M + phi_of(p, x) + phi_of(p, y) + 1e-9)
        throw HypothesisViolation("phi(xy) <= M + phi(x) + phi(y) fails");
}

BetaCurve beta_one() {
  return {1.0, [](double) { return 1.0; }, "1"};
}

BetaCurve beta_log() {
  return {1.0, [](double s) { return 1.0 / (1.0 + std::log(s)); }, "1/(1+log s)"};
}

double beta_monotonicity_defect(const BetaCurve& beta, double s_max) {
  double worst = 0.0, prev = kInf;
  for (double s : logspace(beta.s0, s_max, 257)) {
    double v = beta(s);
    worst = std::max(worst, v - prev);
    prev = v;
  }
  return worst;
}

double super_bl_residual(const Measure& m, const TestFunction& g, double s,
                         const BetaCurve& beta) {
  if (s < beta.s0) throw OutOfRange("super_bl_residual: s below s0");
  double l2 = integrate(m, [&](double x) { double v = g.f(x); return v * v; }).value;
  double l1 = integrate(m, [&](double x) { return std::abs(g.f(x)); }).value;
  double en = bl_energy(m, g).value;
  double b = beta(s);
  if (en < 1e-300) return s * l1 * l1 - l2;
  if (std::isinf(b)) return kInf;
  return b * en + s * l1 * l1 - l2;
}

PhiToBetaResult phi_to_beta(const PhiFunction& phi, double C_phi) {
  if (!(C_phi > 0.0)) throw OutOfRange("phi_to_beta: C_phi must be positive");

  // D = phi(1) + sup over {phi < 0} of x (-phi(x)).
  double sup = 0.0;
  if (phi_of(phi, 1e-12) < 0.0) {
    double xz = 1e-12;
    int steps = 0;
    while (phi_of(phi, xz) < 0.0) {
      xz *= 2.0;
      if (++steps > 200)
        throw DComputationFailure("zero of phi not bracketed");
    }
    xz = bisect(phi.phi, 0.0, xz / 2.0, xz);
    auto h = [&](double x) { return x * (-phi_of(phi, x)); };
    double best_x = 0.0, best = 0.0;
    for (double x : logspace(xz * 1e-14, xz * (1.0 - 1e-12), 512)) {
      double v = h(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    if (best <= 0.0) throw DComputationFailure("sup scan found no positive value");
    MaxResult ref = golden_max(h, best_x * 0.5, std::min(best_x * 2.0, xz));
    sup = std::max(best, ref.value);
  }
  PhiToBetaResult out;
  out.D = phi_of(phi, 1.0) + sup;
  out.s0 = 4.0 * phi.phi_plus_inv(2.0 * out.D);
  out.s0_alt = 4.0 * phi.phi_plus_inv(out.D);

  auto pf = phi.phi;
  out.beta.s0 = out.s0;
  out.beta.label = "4C/phi_plus(s/4)";
  out.beta.value = [pf, C_phi](double s) {
    double p = std::max(pf(s / 4.0), 0.0);
    return p > 0.0 ? 4.0 * C_phi / p : kInf;
  };
  return out;
}

double beta_to_phi(const BetaCurve& beta, const PhiFunction& phi_ext) {
  validate_phi(phi_ext);
  // phi_ext must extend 1/beta on [s0, inf).
  for (double x : logspace(std::max(beta.s0, 1.0), 1e6, 65)) {
    double b = beta(x);
    if (!(b > 0.0)) throw HypothesisViolation("beta must be positive");
    if (std::abs(phi_of(phi_ext, x) * b - 1.0) > 1e-8)
      throw HypothesisViolation("phi does not extend 1/beta at x = " +
                                std::to_string(x));
  }
  const double s0 = beta.s0;
  const double root2 = std::sqrt(2.0);
  return 8.0 / ((root2 - 1.0) * (root2 - 1.0)) *
             (1.0 + beta(s0) * (phi_of(phi_ext, 8.0) + phi_ext.M)) +
         2.0 * phi_ext.gamma * (1.0 + std::sqrt(8.0 * s0)) *
             (1.0 + std::sqrt(8.0 * s0));
}

BetaCurve lambda_transfer(double Lambda, const BetaCurve& beta0) {
  if (!(Lambda > 0.0)) throw OutOfRange("lambda_transfer: Lambda must be > 0");
  auto v = beta0.value;
  double s0 = beta0.s0;
  return {s0, [v, Lambda, s0](double s) { return Lambda * v(s < s0 ? s0 : s); },
          "scaled " + beta0.label};
}

double sup_d2V(const Measure& m) {
  const Potential& pot = m.potential();
  double best_x = m.lo(), best = -kInf;
  const int n = 512;
  for (int i = 0; i <= n; ++i) {
    double x = m.lo() + (m.hi() - m.lo()) * i / n;
    double v = pot.d2V(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double h = (m.hi() - m.lo()) / n;
  MaxResult ref = golden_max([&](double x) { return pot.d2V(x); },
                             std::max(m.lo(), best_x - h),
                             std::min(m.hi(), best_x + h));
  return std::max(best, ref.value);
}

std::vector<TestFunction> dyadic_cutoffs(const TestFunction& f, int n_lo,
                                         int n_hi) {
  std::vector<TestFunction> out;
  auto fv = f.f;
  auto fd = f.df;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double a = std::sqrt(std::exp2(n - 1));
    const double b = std::sqrt(std::exp2(n));
    TestFunction tf;
    tf.piecewise = true;
    tf.label = f.label + "|cutoff(n=" + std::to_string(n) + ")";
    tf.f = [fv, a, b](double x) {
      double t = (std::abs(fv(x)) - a) / (b - a);
      return std::clamp(t, 0.0, 1.0);
    };
    tf.df = [fv, fd, a, b](double x) {
      double v = fv(x);
      double t = (std::abs(v) - a) / (b - a);
      if (t <= 0.0 || t >= 1.0) return 0.0;
      return (v >= 0.0 ? 1.0 : -1.0) * fd(x) / (b - a);
    };
    out.push_back(std::move(tf));
  }
  return out;
}

std::vector<ProfilePoint> beta_profile(const Measure& m,
                                       const std::vector<double>& s_grid,
                                       const std::vector<TestFunction>& battery,
                                       const ProfileConfig& cfg) {
  if (battery.empty()) throw EmptyFamily("beta_profile: empty battery");

  std::vector<TestFunction> family = battery;
  if (cfg.use_cutoffs)
    for (const auto& g : battery) {
      TestFunction gn = normalized_l2(m, g);
      for (auto& c : dyadic_cutoffs(gn, cfg.cutoff_lo, cfg.cutoff_hi))
        family.push_back(std::move(c));
    }

  struct Candidate {
    double l2, l1sq, energy;
    const TestFunction* fn;
  };
  std::vector<Candidate> cands;
  for (const auto& g : family) {
    double l2 = integrate(m, [&](double x) { double v = g.f(x); return v * v; }).value;
    double l1 = integrate(m, [&](double x) { return std::abs(g.f(x)); }).value;
    double en = bl_energy(m, g).value;
    if (en >= kEnergyFloor) cands.push_back({l2, l1 * l1, en, &g});
  }
  if (cands.empty()) throw EmptyFamily("beta_profile: all candidates excluded");

  DiscretizedForms df;
  std::vector<Eigen::VectorXd> interpolants;
  if (cfg.use_eigen) {
    df = discretize_forms(m, cfg.eigen_mesh);
    for (const auto& c : cands) {
      Eigen::VectorXd v = df.interpolate(*c.fn);
      if (v.dot(df.E * v) >= kEnergyFloor) interpolants.push_back(std::move(v));
    }
  }

  std::vector<ProfilePoint> pts;
  pts.reserve(s_grid.size());
  for (double s : s_grid) {
    ProfilePoint pt;
    pt.s = s;
    pt.beta_hat = 0.0;
    pt.witness = "none";
    for (const auto& c : cands) {
      double r = (c.l2 - s * c.l1sq) / c.energy;
      if (r > pt.beta_hat) {
        pt.beta_hat = r;
        pt.witness = c.fn->label;
      }
    }
    if (cfg.use_eigen) {
      // Seed the sign-pattern iteration with the best mesh interpolants at
      // this s, so the eigen route can only improve on the function family.
      std::vector<std::pair<double, const Eigen::VectorXd*>> ranked;
      ranked.reserve(interpolants.size());
      for (const auto& v : interpolants)
        ranked.emplace_back(df.beta_ratio(v, s), &v);
      std::sort(ranked.begin(), ranked.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      std::vector<Eigen::VectorXd> seeds;
      for (std::size_t i = 0; i < ranked.size() && i < 3; ++i)
        seeds.push_back(*ranked[i].second);
      BetaEigenResult er = worst_beta_eigen(df, s, cfg.eigen_iters, seeds);
      if (er.beta_lower > pt.beta_hat) {
        pt.beta_hat = er.beta_lower;
        pt.witness = "eigen-adversary";
      }
    }
    pts.push_back(std::move(pt));
  }
  // Isotonic pass: candidate ratios are affine non-increasing in s, so any
  // violation is float noise; clean it from the right.
  for (std::size_t i = pts.size(); i-- > 1;)
    pts[i - 1].beta_hat = std::max(pts[i - 1].beta_hat, pts[i].beta_hat);
  return pts;
}

namespace {

std::optional<double> phi_ratio_on_rule(const Measure& m, const Rule& r,
                                        const PhiFunction& phi,
                                        const TestFunction& g) {
  const Potential& pot = m.potential();
  double en = integrate(m, r, [&](double x) {
                double d = g.df(x);
                return d * d / pot.d2V(x);
              }).value;
  if (en < kEnergyFloor) return std::nullopt;
  double t = integrate(m, r, [&](double x) { double v = g.f(x); return v * v; }).value;
  double num = integrate(m, r, [&](double x) {
                 double v = g.f(x);
                 return Phi_safe(phi, v * v);
               }).value -
               Phi_safe(phi, t);
  return std::max(0.0, num / en);
}

}  // namespace

std::optional<double> phi_ratio(const Measure& m, const PhiFunction& phi,
                                const TestFunction& g) {
  return phi_ratio_on_rule(m, m.rule(), phi, g);
}

std::optional<double> phi_ratio(const Measure& m, const PhiFunction& phi,
                                const TestFunction& g, int level) {
  return phi_ratio_on_rule(m, m.make_rule(level), phi, g);
}

namespace {

struct Grid2D {
  Rule ra, rb;
  const Potential *pa, *pb;
};

std::optional<double> ratio_2d_impl(const Grid2D& g2, const PhiFunction& phi,
                                    const TestFunction2D& g,
                                    double* out_worst_slice,
                                    double* out_marginal_ratio) {
  const auto& ra = g2.ra;
  const auto& rb = g2.rb;
  const std::size_t na = ra.x.size(), nb = rb.x.size();

  NeumaierSum T2s, N2s, E2s;
  double worst_slice = 0.0;
  std::vector<double> Gsq(nb, 0.0), Gp(nb, 0.0);

  for (std::size_t j = 0; j < nb; ++j) {
    const double y = rb.x[j], wy = rb.wmu[j];
    const double inv_d2b = 1.0 / g2.pb->d2V(y);
    NeumaierSum t_j, n_j, ea_j, eb_j, gg_j;
    for (std::size_t i = 0; i < na; ++i) {
      const double x = ra.x[i], wx = ra.wmu[i];
      const double v = g.f(x, y);
      const double vx = g.fx(x, y), vy = g.fy(x, y);
      if (!std::isfinite(v) || !std::isfinite(vx) || !std::isfinite(vy))
        throw NonFinite("2D integrand not finite");
      t_j.add(wx * v * v);
      n_j.add(wx * Phi_safe(phi, v * v));
      ea_j.add(wx * vx * vx / g2.pa->d2V(x));
      eb_j.add(wx * vy * vy);
      gg_j.add(wx * v * vy);
    }
    const double tj = t_j.value();
    T2s.add(wy * tj);
    N2s.add(wy * n_j.value());
    E2s.add(wy * (ea_j.value() + eb_j.value() * inv_d2b));
    if (ea_j.value() >= kEnergyFloor) {
      double r = (n_j.value() - Phi_safe(phi, tj)) / ea_j.value();
      worst_slice = std::max(worst_slice, r);
    }
    Gsq[j] = std::max(tj, 0.0);
    Gp[j] = tj > 1e-300 ? gg_j.value() / std::sqrt(tj) : 0.0;
  }

  if (out_worst_slice) *out_worst_slice = worst_slice;

  if (out_marginal_ratio) {
    NeumaierSum nb_s, tb_s, eb_s;
    for (std::size_t j = 0; j < nb; ++j) {
      const double wy = rb.wmu[j];
      nb_s.add(wy * Phi_safe(phi, Gsq[j]));
      tb_s.add(wy * Gsq[j]);
      eb_s.add(wy * Gp[j] * Gp[j] / g2.pb->d2V(rb.x[j]));
    }
    *out_marginal_ratio =
        eb_s.value() >= kEnergyFloor
            ? std::max(0.0, (nb_s.value() - Phi_safe(phi, tb_s.value())) /
                                eb_s.value())
            : 0.0;
  }

  if (E2s.value() < kEnergyFloor) return std::nullopt;
  return std::max(0.0, (N2s.value() - Phi_safe(phi, T2s.value())) / E2s.value());
}

}  // namespace

std::optional<double> phi_ratio_2d(const Measure& a, const Measure& b,
                                   const PhiFunction& phi,
                                   const TestFunction2D& g, int level) {
  Grid2D g2{a.make_rule(level), b.make_rule(level), &a.potential(),
            &b.potential()};
  return ratio_2d_impl(g2, phi, g, nullptr, nullptr);
}

TensorReport tensor_check(const Measure& a, const Measure& b,
                          const PhiFunction& phi,
                          const std::vector<TestFunction2D>& family,
                          const std::vector<TestFunction>& battery_a,
                          const std::vector<TestFunction>& battery_b,
                          int level) {
  if (family.empty()) throw EmptyFamily("tensor_check: empty 2D family");
  Grid2D g2{a.make_rule(level), b.make_rule(level), &a.potential(),
            &b.potential()};

  TensorReport rep;
  for (const auto& g : family) {
    double worst_slice = 0.0, marg = 0.0;
    auto r2 = ratio_2d_impl(g2, phi, g, &worst_slice, &marg);
    rep.worst_1d_a = std::max(rep.worst_1d_a, worst_slice);
    rep.worst_1d_b = std::max(rep.worst_1d_b, marg);
    if (r2 && *r2 > rep.worst_2d) {
      rep.worst_2d = *r2;
      rep.witness_2d = g.label;
    }
  }
  for (const auto& f : battery_a)
    if (auto r = phi_ratio(a, phi, f)) rep.worst_1d_a = std::max(rep.worst_1d_a, *r);
  for (const auto& f : battery_b)
    if (auto r = phi_ratio(b, phi, f)) rep.worst_1d_b = std::max(rep.worst_1d_b, *r);
  return rep;
}

double entropic_check(const Measure& m, const std::vector<TestFunction>& family) {
  if (family.empty()) throw EmptyFamily("entropic_check: empty family");
  double worst = 0.0;
  for (const auto& f : family) {
    double en = bl_energy(m, f).value;
    if (en < kEnergyFloor) continue;
    worst = std::max(worst, entropy(m, f).value / en);
  }
  return worst;
}

double rothaus_residual(const Measure& m, const TestFunction& f) {
  double n2 = integrate(m, [&](double x) { double v = f.f(x); return v * v; }).value;
  if (!(n2 > 1e-300)) throw DegenerateFunction("rothaus_residual: f ~ 0");
  double mean = integrate(m, f.f).value;
  auto fv = f.f;
  TestFunction centered;
  centered.f = [fv, mean](double x) { return fv(x) - mean; };
  centered.df = f.df;
  centered.label = f.label + "-mean";
  double var = variance(m, f).value;
  double ent = entropy(m, f).value;          // Ent(f^2)
  double entc = entropy(m, centered).value;  // Ent(f~^2); throws if f const
  return 2.0 * var + entc - ent;
}

}  // namespace bllab
