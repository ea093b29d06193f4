#include "bllab/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bllab/errors.hpp"
#include "bllab/measures.hpp"

namespace bllab {

namespace {

double checked(double v, double x) {
  if (!std::isfinite(v))
    throw NonFinite("integrand not finite at node x = " + std::to_string(x));
  return v;
}

double err_floor(double fine, double coarse) {
  return std::abs(fine - coarse) + 1e-16 * std::abs(fine) + 1e-300;
}

}  // namespace

Integral integrate(const Measure& m, const Rule& r,
                   const std::function<double(double)>& f) {
  (void)m;
  NeumaierSum fine, coarse;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    fine.add(r.wmu[i] * checked(f(r.x[i]), r.x[i]));
  for (std::size_t i = 0; i < r.cx.size(); ++i)
    coarse.add(r.cwmu[i] * checked(f(r.cx[i]), r.cx[i]));
  double v = fine.value();
  return {v, err_floor(v, coarse.value())};
}

Integral integrate(const Measure& m, const std::function<double(double)>& f) {
  return integrate(m, m.rule(), f);
}

Integral integrate_dx(const Measure& m, const Rule& r,
                      const std::function<double(double)>& f, double a,
                      double b) {
  a = std::max(a, m.lo());
  b = std::min(b, m.hi());
  if (!(a < b)) return {0.0, 0.0};

  auto segment = [&](int order, double lo, double hi) {
    const GaussRule& g = gauss_legendre(order);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    NeumaierSum s;
    for (int i = 0; i < order; ++i) {
      double xi = mid + half * g.x[i];
      s.add(half * g.w[i] * checked(f(xi), xi));
    }
    return s.value();
  };

  auto run = [&](int order, const std::vector<double>& nodes,
                 const std::vector<double>& wts, int per_panel) {
    const auto& bd = r.bounds;
    auto ia = std::upper_bound(bd.begin(), bd.end(), a);
    auto ib = std::upper_bound(bd.begin(), bd.end(), b);
    std::size_t pa = std::min<std::size_t>(ia - bd.begin() - 1, r.panels() - 1);
    std::size_t pb = std::min<std::size_t>(ib - bd.begin() - 1, r.panels() - 1);
    NeumaierSum s;
    if (pa == pb) {
      s.add(segment(order, a, b));
    } else {
      s.add(segment(order, a, bd[pa + 1]));
      for (std::size_t p = pa + 1; p < pb; ++p)
        for (int i = 0; i < per_panel; ++i) {
          std::size_t k = p * per_panel + i;
          s.add(wts[k] * checked(f(nodes[k]), nodes[k]));
        }
      s.add(segment(order, bd[pb], b));
    }
    return s.value();
  };

  double v = run(r.order, r.x, r.wdx, r.order);
  double vc = run(r.order_coarse, r.cx, r.cwdx, r.order_coarse);
  return {v, err_floor(v, vc)};
}

Integral integrate_dx(const Measure& m, const std::function<double(double)>& f,
                      double a, double b) {
  return integrate_dx(m, m.rule(), f, a, b);
}

namespace {

// Tensor sum with a per-axis choice of fine/coarse companions.
double tensor_sum(const ProductMeasure& pm,
                  const std::vector<const Rule*>& rules,
                  const std::function<double(std::span<const double>)>& f,
                  int coarse_axis) {
  const int d = pm.dim();
  std::array<const std::vector<double>*, 3> xs{}, ws{};
  for (int k = 0; k < d; ++k) {
    bool c = k == coarse_axis;
    xs[k] = c ? &rules[k]->cx : &rules[k]->x;
    ws[k] = c ? &rules[k]->cwmu : &rules[k]->wmu;
  }
  std::array<double, 3> pt{};
  NeumaierSum s;
  if (d == 1) {
    for (std::size_t i = 0; i < xs[0]->size(); ++i) {
      pt[0] = (*xs[0])[i];
      double v = f(std::span<const double>(pt.data(), 1));
      if (!std::isfinite(v)) throw NonFinite("product integrand not finite");
      s.add((*ws[0])[i] * v);
    }
  } else if (d == 2) {
    for (std::size_t i = 0; i < xs[0]->size(); ++i) {
      pt[0] = (*xs[0])[i];
      NeumaierSum inner;
      for (std::size_t j = 0; j < xs[1]->size(); ++j) {
        pt[1] = (*xs[1])[j];
        double v = f(std::span<const double>(pt.data(), 2));
        if (!std::isfinite(v)) throw NonFinite("product integrand not finite");
        inner.add((*ws[1])[j] * v);
      }
      s.add((*ws[0])[i] * inner.value());
    }
  } else {
    for (std::size_t i = 0; i < xs[0]->size(); ++i) {
      pt[0] = (*xs[0])[i];
      NeumaierSum mid;
      for (std::size_t j = 0; j < xs[1]->size(); ++j) {
        pt[1] = (*xs[1])[j];
        NeumaierSum inner;
        for (std::size_t k = 0; k < xs[2]->size(); ++k) {
          pt[2] = (*xs[2])[k];
          double v = f(std::span<const double>(pt.data(), 3));
          if (!std::isfinite(v)) throw NonFinite("product integrand not finite");
          inner.add((*ws[2])[k] * v);
        }
        mid.add((*ws[1])[j] * inner.value());
      }
      s.add((*ws[0])[i] * mid.value());
    }
  }
  return s.value();
}

}  // namespace

Integral integrate_product(const std::vector<const Rule*>& rules,
                           const ProductMeasure& pm,
                           const std::function<double(std::span<const double>)>& f) {
  const int d = pm.dim();
  if (d > 3) throw DimensionCap("product dimension must be <= 3");
  double v = tensor_sum(pm, rules, f, -1);
  NeumaierSum err;
  for (int k = 0; k < d; ++k)
    err.add(std::abs(v - tensor_sum(pm, rules, f, k)));
  return {v, err.value() + 1e-16 * std::abs(v) + 1e-300};
}

Integral integrate_product(const ProductMeasure& pm,
                           const std::function<double(std::span<const double>)>& f) {
  std::vector<const Rule*> rules;
  for (int k = 0; k < pm.dim(); ++k) rules.push_back(&pm.factor(k).rule());
  return integrate_product(rules, pm, f);
}

}  // namespace bllab
