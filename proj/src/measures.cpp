#include "bllab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bllab/errors.hpp"

namespace bllab {

namespace {

constexpr double kSupportNats = 40.0;  // support cut at V = min V + 40
constexpr double kProbeNats = 20.0;    // probe window for derivative checks

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

// ---------------------------------------------------------------------------
// Potential

Potential Potential::gaussian(double a) {
  if (!(a > 0.0)) throw NonConvex("gaussian potential requires a > 0");
  Potential p;
  p.kind_ = PotentialKind::gaussian;
  p.a_ = a;
  p.symmetric_ = true;
  p.xmin_ = 0.0;
  p.V_ = [a](double x) { return 0.5 * a * x * x; };
  p.dV_ = [a](double x) { return a * x; };
  p.d2V_ = [a](double) { return a; };
  p.validate();
  return p;
}

Potential Potential::power(double pexp, double r) {
  if (!(pexp > 1.0)) throw NonConvex("power potential requires p > 1");
  if (r < 0.0) throw NonConvex("power potential requires r >= 0");
  Potential p;
  p.kind_ = PotentialKind::power;
  p.p_ = pexp;
  p.r_ = r;
  p.symmetric_ = true;
  p.xmin_ = 0.0;
  if (r == 0.0) {
    p.V_ = [pexp](double x) { return std::pow(std::abs(x), pexp); };
    p.dV_ = [pexp](double x) {
      return x == 0.0 ? 0.0
                      : pexp * std::pow(std::abs(x), pexp - 1.0) *
                            (x > 0.0 ? 1.0 : -1.0);
    };
    p.d2V_ = [pexp](double x) {
      return pexp * (pexp - 1.0) * std::pow(std::abs(x), pexp - 2.0);
    };
  } else {
    // V(x) = (x^2 + r^2)^{p/2}: C^2, convex, tails of e^{-|x|^p}.
    p.V_ = [pexp, r](double x) { return std::pow(x * x + r * r, 0.5 * pexp); };
    p.dV_ = [pexp, r](double x) {
      return pexp * x * std::pow(x * x + r * r, 0.5 * pexp - 1.0);
    };
    p.d2V_ = [pexp, r](double x) {
      double u = x * x + r * r;
      return pexp * std::pow(u, 0.5 * pexp - 2.0) *
             ((pexp - 1.0) * x * x + r * r);
    };
  }
  p.validate();
  return p;
}

Potential Potential::custom(std::function<double(double)> V,
                            std::function<double(double)> dV,
                            std::function<double(double)> d2V, bool symmetric) {
  Potential p;
  p.kind_ = PotentialKind::custom;
  p.symmetric_ = symmetric;
  p.V_ = std::move(V);
  p.dV_ = std::move(dV);
  p.d2V_ = std::move(d2V);
  p.locate_min();
  p.validate();
  return p;
}

void Potential::locate_min() {
  if (symmetric_) {
    xmin_ = 0.0;
    return;
  }
  double B = 4.0;
  for (int round = 0; round < 40; ++round) {
    int n = 257;
    double best = 0.0, bestv = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double x = -B + 2.0 * B * i / (n - 1);
      double v = V_(x);
      if (v < bestv) {
        bestv = v;
        best = x;
      }
    }
    if (std::abs(best) < 0.9 * B) {
      double h = 2.0 * B / (n - 1);
      auto neg = [this](double x) { return -V_(x); };
      xmin_ = golden_max(neg, best - h, best + h).x;
      if (std::abs(xmin_) < 1e-9) xmin_ = 0.0;
      return;
    }
    B *= 4.0;
  }
  throw TailDivergence("custom potential: minimum not bracketed");
}

void Potential::validate() const {
  // Probe window: where V <= min V + 20 nats (strictly inside the support).
  const double vmin = V_(xmin_);
  auto find_edge = [&](double dir) {
    double w = 1.0;
    for (int i = 0; i < 200 && V_(xmin_ + dir * w) - vmin < kProbeNats; ++i)
      w *= 2.0;
    if (V_(xmin_ + dir * w) - vmin < kProbeNats)
      throw TailDivergence("potential grows too slowly to truncate");
    return bisect([&](double t) { return V_(xmin_ + dir * t); },
                  vmin + kProbeNats, w / 2.0 <= 1e-8 ? 0.0 : w / 2.0, w);
  };
  const double wr = find_edge(1.0);
  const double wl = find_edge(-1.0);
  const double lo = xmin_ - wl, hi = xmin_ + wr;

  const int n = 101;
  for (int i = 0; i < n; ++i) {
    // Offset grid: never lands on the minimum, where |x|^p kinds may kink.
    double x = lo + (i + 0.37) * (hi - lo) / n;
    double d2 = d2V_(x);
    if (!(d2 > 0.0))
      throw NonConvex("V'' <= 0 at probe point x = " + std::to_string(x));

    double h1 = 3e-6 * std::max(1.0, std::abs(x));
    double fd1 = (V_(x + h1) - V_(x - h1)) / (2.0 * h1);
    if (rel_gap(fd1, dV_(x)) > 1e-5)
      throw InconsistentDerivatives("V' mismatch at x = " + std::to_string(x));

    double h2 = 1e-4 * std::max(1.0, std::abs(x));
    double fd2 = (dV_(x + h2) - dV_(x - h2)) / (2.0 * h2);
    if (rel_gap(fd2, d2V_(x)) > 1e-5)
      throw InconsistentDerivatives("V'' mismatch at x = " + std::to_string(x));

    if (symmetric_ && rel_gap(V_(x), V_(-x)) > 1e-12)
      throw InconsistentDerivatives("symmetry violated at x = " +
                                    std::to_string(x));
  }
}

std::string Potential::describe() const {
  char buf[128];
  switch (kind_) {
    case PotentialKind::gaussian:
      std::snprintf(buf, sizeof buf, "gaussian(a=%g)", a_);
      break;
    case PotentialKind::power:
      std::snprintf(buf, sizeof buf, "power(p=%g,r=%g)", p_, r_);
      break;
    default:
      std::snprintf(buf, sizeof buf, "custom");
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Measure

namespace {

// Panel boundaries on the monotone side from x0 (= argmin V) towards `edge`.
// Union of an equal-mass partition of e^{-V} and an equal-increment
// partition of V, so both e^{-V} and e^{+V} integrands behave per panel.
std::vector<double> side_boundaries(const Potential& pot, double x0,
                                    double edge, int per_grid) {
  std::vector<double> cuts;
  const double v0 = pot.V(x0);
  const double v1 = pot.V(edge);

  // Equal potential increments (V is monotone from x0 to edge).
  for (int i = 1; i < per_grid; ++i) {
    double target = v0 + (v1 - v0) * i / per_grid;
    cuts.push_back(bisect([&](double t) { return pot.V(t); }, target,
                          std::min(x0, edge), std::max(x0, edge)));
  }

  // Equal mass of e^{-(V - v0)} via a dense trapezoid CDF.
  const int dense = 16384;
  std::vector<double> cdf(dense + 1, 0.0);
  double h = (edge - x0) / dense;
  double prev = std::exp(-(pot.V(x0) - v0));
  for (int i = 1; i <= dense; ++i) {
    double cur = std::exp(-(pot.V(x0 + i * h) - v0));
    cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * std::abs(h);
    prev = cur;
  }
  double total = cdf[dense];
  for (int i = 1; i < per_grid; ++i) {
    double target = total * i / per_grid;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    std::size_t k = std::min<std::size_t>(it - cdf.begin(), dense);
    double frac = k == 0 ? 0.0
                         : (k - 1) + (target - cdf[k - 1]) /
                                         std::max(cdf[k] - cdf[k - 1], 1e-300);
    cuts.push_back(x0 + frac * h);
  }

  cuts.push_back(x0);
  cuts.push_back(edge);
  std::sort(cuts.begin(), cuts.end());
  // Deduplicate near-coincident boundaries.
  std::vector<double> out;
  double min_sep = std::abs(edge - x0) * 1e-9;
  for (double c : cuts)
    if (out.empty() || std::abs(c - out.back()) > min_sep) out.push_back(c);
  if (out.back() != edge) out.back() = edge;
  return out;
}

}  // namespace

Measure::Measure(Potential pot, double tol, bool half_line, int level)
    : pot_(std::move(pot)), tol_(tol), half_line_(half_line) {
  if (!(tol > 1e-14 && tol < 1e-2))
    throw OutOfRange("truncation tol must lie in (1e-14, 1e-2)");
  if (level < 1 || level > 16) throw OutOfRange("level must lie in [1, 16]");
  if (half_line_ && !pot_.symmetric())
    throw HypothesisViolation("half-line variant requires a symmetric potential");

  const double x0 = pot_.argmin();
  const double vmin = pot_.V(x0);
  auto edge = [&](double dir) {
    double w = 1.0;
    for (int i = 0; i < 200 && pot_.V(x0 + dir * w) - vmin < kSupportNats; ++i)
      w *= 2.0;
    if (pot_.V(x0 + dir * w) - vmin < kSupportNats)
      throw TailDivergence("potential grows too slowly to truncate");
    return x0 + dir * bisect([&](double t) { return pot_.V(x0 + dir * t); },
                             vmin + kSupportNats, 0.0, w);
  };
  hi_ = edge(1.0);
  lo_ = half_line_ ? 0.0 : edge(-1.0);
  if (pot_.symmetric() && !half_line_) lo_ = -hi_;  // exact mirror

  if (!(pot_.dV(hi_) > 0.0))
    throw TailDivergence("V' <= 0 at the right support edge");
  tail_right_ = std::exp(-pot_.V(hi_)) / pot_.dV(hi_);
  tail_left_ =
      half_line_ ? 0.0 : std::exp(-pot_.V(lo_)) / std::abs(pot_.dV(lo_));

  rule_ = make_rule(level);

  NeumaierSum zs;
  for (double m : rule_.panel_mass) zs.add(m);
  zs.add(tail_right_);
  zs.add(tail_left_);
  Z_ = zs.value();
  if (!(Z_ > 0.0) || !std::isfinite(Z_))
    throw TailDivergence("normalisation failed");

  // Normalise the mu-weights now that Z is known.
  for (double& w : rule_.wmu) w /= Z_;
  for (double& w : rule_.cwmu) w /= Z_;
}

Rule Measure::make_rule(int level) const {
  if (level < 1 || level > 16) throw OutOfRange("level must lie in [1, 16]");
  const int per_grid = std::max(1, 1 << (level - 2));
  const double x0 = pot_.argmin();

  std::vector<double> bounds;
  if (half_line_ || lo_ == x0) {
    bounds = side_boundaries(pot_, x0, hi_, per_grid);
  } else if (pot_.symmetric()) {
    std::vector<double> right = side_boundaries(pot_, 0.0, hi_, per_grid);
    bounds.reserve(2 * right.size());
    for (std::size_t i = right.size(); i-- > 1;) bounds.push_back(-right[i]);
    bounds.insert(bounds.end(), right.begin(), right.end());
  } else {
    std::vector<double> left = side_boundaries(pot_, x0, lo_, per_grid);
    std::vector<double> right = side_boundaries(pot_, x0, hi_, per_grid);
    std::sort(left.begin(), left.end());
    bounds = std::move(left);
    bounds.insert(bounds.end(), right.begin() + 1, right.end());
  }

  Rule r;
  r.level = level;
  r.bounds = std::move(bounds);
  const std::size_t np = r.bounds.size() - 1;
  const GaussRule& gf = gauss_legendre(r.order);
  const GaussRule& gc = gauss_legendre(r.order_coarse);
  r.x.reserve(np * r.order);
  r.wdx.reserve(np * r.order);
  r.wmu.reserve(np * r.order);
  r.panel_mass.assign(np, 0.0);

  for (std::size_t p = 0; p < np; ++p) {
    const double a = r.bounds[p], b = r.bounds[p + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    NeumaierSum mass;
    for (int i = 0; i < r.order; ++i) {
      double xi = mid + half * gf.x[i];
      double wi = half * gf.w[i];
      double dens = std::exp(-pot_.V(xi));
      r.x.push_back(xi);
      r.wdx.push_back(wi);
      r.wmu.push_back(wi * dens);  // divided by Z once Z is known
      mass.add(wi * dens);
    }
    r.panel_mass[p] = mass.value();
    for (int i = 0; i < r.order_coarse; ++i) {
      double xi = mid + half * gc.x[i];
      double wi = half * gc.w[i];
      r.cx.push_back(xi);
      r.cwdx.push_back(wi);
      r.cwmu.push_back(wi * std::exp(-pot_.V(xi)));
    }
  }

  r.suffix_mass.assign(np + 1, 0.0);
  NeumaierSum suf;
  for (std::size_t p = np; p-- > 0;) {
    suf.add(r.panel_mass[p]);
    r.suffix_mass[p] = suf.value();
  }

  if (Z_ > 0.0) {  // re-levelling an already-normalised measure
    for (double& w : r.wmu) w /= Z_;
    for (double& w : r.cwmu) w /= Z_;
  }
  return r;
}

double Measure::density(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  return std::exp(-pot_.V(x)) / Z_;
}

double Measure::tail_mass(double x) const {
  if (x >= hi_) return tail_right_ / Z_;
  if (x <= lo_) return 1.0;
  const auto& b = rule_.bounds;
  auto it = std::upper_bound(b.begin(), b.end(), x);
  std::size_t p = std::min<std::size_t>(it - b.begin() - 1, rule_.panels() - 1);
  // Partial panel [x, bounds[p+1]] by fine Gauss, then stored suffix sums.
  const GaussRule& g = gauss_legendre(rule_.order);
  const double mid = 0.5 * (x + b[p + 1]), half = 0.5 * (b[p + 1] - x);
  NeumaierSum s;
  for (int i = 0; i < rule_.order; ++i)
    s.add(half * g.w[i] * std::exp(-pot_.V(mid + half * g.x[i])));
  s.add(rule_.suffix_mass[p + 1]);
  s.add(tail_right_);
  return s.value() / Z_;
}

std::string Measure::describe() const {
  return pot_.describe() + (half_line_ ? " on [0, inf)" : "");
}

ProductMeasure::ProductMeasure(std::vector<Measure> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty() || factors_.size() > 3)
    throw DimensionCap("product dimension must be 1..3");
}

}  // namespace bllab
