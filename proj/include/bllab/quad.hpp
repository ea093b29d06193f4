#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bllab/numerics.hpp"

namespace bllab {

class Measure;
class ProductMeasure;

struct Integral {
  double value = 0.0;
  double err = 0.0;
};

/// Composite Gauss-Legendre rule over panels of a truncated support.
///
/// Panels are the union of an equal-mass partition of e^{-V} and an
/// equal-potential-increment partition, so that both e^{-V}-weighted and
/// e^{+V}-growing integrands (capacity integrals) see bounded variation per
/// panel. A lower-order companion on the same panels drives error estimates.
struct Rule {
  int level = 0;
  int order = 8;         // fine Gauss order per panel (design degree 15)
  int order_coarse = 5;  // companion order for error estimates

  std::vector<double> bounds;  // panel boundaries, strictly increasing
  std::vector<double> x, wdx, wmu;     // fine nodes, Lebesgue and mu weights
  std::vector<double> cx, cwdx, cwmu;  // coarse companion

  std::vector<double> panel_mass;   // per-panel \int e^{-V} dx (unnormalised)
  std::vector<double> suffix_mass;  // suffix sums of panel_mass

  std::size_t panels() const { return panel_mass.size(); }
  std::size_t size() const { return x.size(); }
  std::span<const double> panel_nodes(std::size_t p) const {
    return std::span<const double>(x).subspan(p * order, order);
  }
  std::span<const double> panel_weights(std::size_t p) const {
    return std::span<const double>(wdx).subspan(p * order, order);
  }
};

/// \int f dmu with a level-comparison error estimate. Throws NonFinite if the
/// integrand evaluates to NaN/inf at a node.
Integral integrate(const Measure& m, const Rule& r,
                   const std::function<double(double)>& f);
Integral integrate(const Measure& m, const std::function<double(double)>& f);

/// Lebesgue integral of f over [a, b] (clipped to the support), using the
/// rule's panels plus partial-panel Gauss segments at the two ends.
Integral integrate_dx(const Measure& m, const Rule& r,
                      const std::function<double(double)>& f, double a,
                      double b);
Integral integrate_dx(const Measure& m, const std::function<double(double)>& f,
                      double a, double b);

/// Tensor-product integration against a product measure (dimension <= 3).
/// The error estimate swaps one axis at a time to its coarse companion and
/// accumulates the observed differences.
Integral integrate_product(const ProductMeasure& pm,
                           const std::function<double(std::span<const double>)>& f);
Integral integrate_product(const std::vector<const Rule*>& rules,
                           const ProductMeasure& pm,
                           const std::function<double(std::span<const double>)>& f);

}  // namespace bllab
