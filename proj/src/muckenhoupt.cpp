#include "bllab/muckenhoupt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bllab/errors.hpp"

namespace bllab {

namespace {

constexpr double kStabilTol = 1e-4;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_symmetric(const Measure& m) {
  if (!m.symmetric() || m.half_line())
    throw HypothesisViolation(
        "Muckenhoupt criterion requires a symmetric full-line measure");
}

}  // namespace

CapacityTable::CapacityTable(const Measure& m) : m_(&m) {
  require_symmetric(m);
  const Potential& pot = m.potential();
  const auto& all = m.rule().bounds;
  // Positive-side panel boundaries (0 is a boundary by construction).
  for (double b : all)
    if (b >= 0.0) bounds_.push_back(b);
  if (bounds_.empty() || bounds_.front() != 0.0)
    bounds_.insert(bounds_.begin(), 0.0);

  const GaussRule& g = gauss_legendre(m.rule().order);
  prefix_.assign(bounds_.size(), 0.0);
  NeumaierSum acc;
  for (std::size_t p = 0; p + 1 < bounds_.size(); ++p) {
    const double a = bounds_[p], b = bounds_[p + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    NeumaierSum s;
    for (int i = 0; i < m.rule().order; ++i) {
      double x = mid + half * g.x[i];
      s.add(half * g.w[i] * pot.d2V(x) * std::exp(pot.V(x)));
    }
    acc.add(s.value());
    prefix_[p + 1] = acc.value();
  }
}

double CapacityTable::integral_to(double x) const {
  if (!(x > 0.0) || x > edge())
    throw OutOfSupport("capacity integral requested outside (0, R]");
  auto it = std::upper_bound(bounds_.begin(), bounds_.end(), x);
  std::size_t p = std::min<std::size_t>(it - bounds_.begin() - 1,
                                        bounds_.size() - 2);
  const Potential& pot = m_->potential();
  const GaussRule& g = gauss_legendre(m_->rule().order);
  const double mid = 0.5 * (bounds_[p] + x), half = 0.5 * (x - bounds_[p]);
  NeumaierSum s;
  for (int i = 0; i < m_->rule().order; ++i) {
    double t = mid + half * g.x[i];
    s.add(half * g.w[i] * pot.d2V(t) * std::exp(pot.V(t)));
  }
  return prefix_[p] + s.value();
}

double capacity(const Measure& m, double x) {
  CapacityTable table(m);
  return 1.0 / table.integral_to(x);
}

namespace {

// Shared sup-scan: 512 log-spaced points from 1e-4 to the support edge,
// then golden-section refinement around the top-5 points. The quantity is
// smooth and asymptotically flat for the built-in potentials.
MuckenhouptReport scan_sup(const Measure& m,
                           const std::function<double(double)>& q) {
  const double edge = m.hi() * (1.0 - 1e-9);
  const auto xs = logspace(1e-4, edge, 512);

  MuckenhouptReport rep;
  rep.trace.reserve(xs.size());
  double sup = -kInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double v = q(xs[i]);
    rep.trace.push_back({xs[i], v});
    if (v > sup) {
      sup = v;
      arg = i;
    }
  }
  if (arg + 1 == xs.size()) {
    rep.finite = false;
    rep.stabilized = false;
    rep.B = kInf;
    rep.x_star = xs[arg];
    return rep;
  }

  // Top-5 scan points, refined by three golden rounds each.
  std::vector<std::size_t> top(xs.size());
  for (std::size_t i = 0; i < top.size(); ++i) top[i] = i;
  std::sort(top.begin(), top.end(), [&](std::size_t a, std::size_t b) {
    return rep.trace[a].value > rep.trace[b].value;
  });
  top.resize(5);

  double refined = sup, x_star = xs[arg];
  double last_round_change = kInf;
  for (int round = 0; round < 3; ++round) {
    double before = refined;
    for (std::size_t k : top) {
      double a = k == 0 ? xs[0] * 0.5 : xs[k - 1];
      double b = k + 1 < xs.size() ? xs[k + 1] : edge;
      MaxResult r = golden_max(q, a, b, 14 * (round + 1));
      if (r.value > refined) {
        refined = r.value;
        x_star = r.x;
      }
    }
    last_round_change = std::abs(refined - before) / std::max(1.0, refined);
  }
  rep.B = refined;
  rep.x_star = x_star;
  rep.finite = true;
  rep.stabilized = last_round_change < kStabilTol;
  return rep;
}

}  // namespace

MuckenhouptReport B_s(const Measure& m, double s) {
  if (!(s >= 1.0)) throw OutOfRange("B_s: s >= 1 required");
  require_symmetric(m);
  CapacityTable table(m);
  return scan_sup(m, [&](double x) {
    double mu = m.tail_mass(x);
    return mu / (1.0 + (s - 1.0) * mu) * table.integral_to(x);
  });
}

MuckenhouptReport B(const Measure& m, const BetaCurve& beta) {
  require_symmetric(m);
  CapacityTable table(m);
  return scan_sup(m, [&](double x) {
    double mu = m.tail_mass(x);
    double b = beta(1.0 / mu);
    if (!(b > 0.0)) return kInf;
    return mu / b * table.integral_to(x);
  });
}

MuckenhouptReport B_log(const Measure& m) { return B(m, beta_log()); }

double sbeta_monotonicity_defect(const BetaCurve& beta, double s_max) {
  double worst = 0.0, prev = -kInf;
  for (double s : logspace(2.0, s_max, 257)) {
    double v = s * beta(s);
    worst = std::max(worst, prev - v);
    prev = v;
  }
  return worst;
}

double factor2_gap(const Measure& m, const BetaCurve& beta, double x) {
  double mu = m.tail_mass(x);
  auto inner = [&](double s) { return mu / ((1.0 + (s - 1.0) * mu) * beta(s)); };
  double lhs = 0.0;
  for (double s : logspace(1.0, std::max(10.0 / mu, 100.0), 400))
    lhs = std::max(lhs, inner(s));
  MaxResult r = golden_max(inner, 1.0, std::max(10.0 / mu, 100.0));
  lhs = std::max(lhs, r.value);
  double rhs = 2.0 * mu / beta(1.0 / mu);
  return rhs - lhs;
}

SuperBLCheck verify_super_bl(const Measure& m, const BetaCurve& beta,
                             const std::vector<TestFunction>& battery,
                             const std::vector<double>& s_grid) {
  if (battery.empty() || s_grid.empty())
    throw EmptyFamily("verify_super_bl: empty battery or s-grid");
  SuperBLCheck out;
  out.min_residual = kInf;
  for (const auto& f : battery) {
    double l2 = integrate(m, [&](double x) { double v = f.f(x); return v * v; }).value;
    double l1 = integrate(m, [&](double x) { return std::abs(f.f(x)); }).value;
    double en = bl_energy(m, f).value;
    for (double s : s_grid) {
      if (!(s >= 1.0)) throw OutOfRange("verify_super_bl: s >= 1 required");
      double res = 8.0 * beta(s) * en + s * l1 * l1 - l2;
      out.rows.push_back({f.label, s, res});
      if (res < out.min_residual) {
        out.min_residual = res;
        out.worst = out.rows.back();
      }
    }
  }
  return out;
}

}  // namespace bllab
