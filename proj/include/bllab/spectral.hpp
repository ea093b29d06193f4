#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "bllab/functionals.hpp"

namespace bllab {

/// P1 finite-element discretisation of the quadratic-form pair
/// (energy with weight 1/V'', L^2(mu)) on a uniform mesh over the truncated
/// support. 2D forms are tensor products of two 1D discretisations.
struct DiscretizedForms {
  int dim = 1;
  int nx = 0, ny = 0;                 // node counts per axis (ny = 0 in 1D)
  std::vector<double> mesh_x, mesh_y; // axis nodes
  Eigen::SparseMatrix<double> E;      // energy form
  Eigen::SparseMatrix<double> M;      // L^2(mu) mass form
  Eigen::VectorXd u;                  // int phi_i dmu (Var = M - u u^T)
  std::vector<Eigen::VectorXd> extremisers;  // nodal V'_j

  /// Nodal interpolation of a 1D function.
  Eigen::VectorXd interpolate(const TestFunction& f) const;
  /// Discrete deficit quadratic form (E - Var) at nodal values v.
  double deficit_form(const Eigen::VectorXd& v) const;
  /// Discrete L^2(mu) norm^2.
  double mass_norm2(const Eigen::VectorXd& v) const;
  /// Discrete super-BL ratio (v^T M v - s (sum u_i |v_i|)^2) / (v^T E v).
  double beta_ratio(const Eigen::VectorXd& v, double s) const;
};

/// Assemble 1D forms with mesh_size nodes (in [64, 8192]).
DiscretizedForms discretize_forms(const Measure& m, int mesh_size);

/// Assemble 2D tensor forms with nx * ny nodes (each axis in [32, 256]).
DiscretizedForms discretize_forms(const Measure& mx, const Measure& my, int nx,
                                  int ny);

/// Smallest generalized eigenvalue of (E - Var, M) on the M-orthogonal
/// complement of span{1, V'_1, ..., V'_n}; 1/lambda is the sharp discrete
/// analogue of the L^2-stability constant.
double stability_eigenvalue(const DiscretizedForms& df);

/// Dense cross-check of stability_eigenvalue (node count <= 2048).
double stability_eigenvalue_dense(const DiscretizedForms& df);

struct BetaEigenResult {
  double beta_lower = 0.0;
  Eigen::VectorXd witness;
  std::vector<double> trace;  // running maxima, one entry per iterate
};

/// Sign-pattern fixed point for the super-BL adversary at parameter s:
/// with signs sigma frozen, (int |f|)^2 becomes the rank-one form
/// ((sigma .* u)^T f)^2 and the optimal f solves a generalized symmetric
/// eigenproblem; sigma is then refreshed to sign(f). The reported bound is
/// the running maximum of the true ratios over all iterates and seeds.
BetaEigenResult worst_beta_eigen(const DiscretizedForms& df, double s,
                                 int iters,
                                 const std::vector<Eigen::VectorXd>& seeds = {});

}  // namespace bllab
