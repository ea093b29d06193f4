#include "bllab/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "bllab/errors.hpp"

namespace bllab {

namespace {

constexpr double kWeightFloor = 1e-12;

struct Forms1D {
  Eigen::SparseMatrix<double> E, M;
  Eigen::VectorXd u;
  Eigen::VectorXd v;  // nodal V'
  std::vector<double> mesh;
};

// P1 assembly with 6-point Gauss per element. Even order keeps quadrature
// nodes off element midpoints, where |x|^p weights may vanish or kink.
Forms1D assemble_1d(const Measure& m, int n) {
  const Potential& pot = m.potential();
  const double lo = m.lo(), hi = m.hi();
  const double h = (hi - lo) / (n - 1);
  const GaussRule& g = gauss_legendre(6);

  Forms1D f;
  f.mesh.resize(n);
  for (int i = 0; i < n; ++i) f.mesh[i] = lo + i * h;
  f.u = Eigen::VectorXd::Zero(n);
  f.v = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) f.v[i] = pot.dV(f.mesh[i]);

  std::vector<Eigen::Triplet<double>> te, tm;
  te.reserve(4 * n);
  tm.reserve(4 * n);
  for (int e = 0; e + 1 < n; ++e) {
    const double a = f.mesh[e], b = f.mesh[e + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double ke = 0.0, m00 = 0.0, m01 = 0.0, m11 = 0.0, u0 = 0.0, u1 = 0.0;
    for (int q = 0; q < 6; ++q) {
      const double x = mid + half * g.x[q];
      const double w = half * g.w[q];
      const double d2 = pot.d2V(x);
      if (!(d2 >= kWeightFloor))
        throw SingularWeight("V'' below floor in element at x = " +
                             std::to_string(x));
      const double dens = std::exp(-pot.V(x)) / m.Z();
      const double p1 = (b - x) / (b - a), p2 = (x - a) / (b - a);
      ke += w * dens / d2;
      m00 += w * dens * p1 * p1;
      m01 += w * dens * p1 * p2;
      m11 += w * dens * p2 * p2;
      u0 += w * dens * p1;
      u1 += w * dens * p2;
    }
    const double k = ke / ((b - a) * (b - a));
    te.emplace_back(e, e, k);
    te.emplace_back(e + 1, e + 1, k);
    te.emplace_back(e, e + 1, -k);
    te.emplace_back(e + 1, e, -k);
    tm.emplace_back(e, e, m00);
    tm.emplace_back(e + 1, e + 1, m11);
    tm.emplace_back(e, e + 1, m01);
    tm.emplace_back(e + 1, e, m01);
    f.u[e] += u0;
    f.u[e + 1] += u1;
  }
  f.E.resize(n, n);
  f.M.resize(n, n);
  f.E.setFromTriplets(te.begin(), te.end());
  f.M.setFromTriplets(tm.begin(), tm.end());
  return f;
}

Eigen::SparseMatrix<double> kron(const Eigen::SparseMatrix<double>& A,
                                 const Eigen::SparseMatrix<double>& B) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(A.nonZeros()) * B.nonZeros());
  for (int ka = 0; ka < A.outerSize(); ++ka)
    for (Eigen::SparseMatrix<double>::InnerIterator ia(A, ka); ia; ++ia)
      for (int kb = 0; kb < B.outerSize(); ++kb)
        for (Eigen::SparseMatrix<double>::InnerIterator ib(B, kb); ib; ++ib)
          t.emplace_back(ia.row() * B.rows() + ib.row(),
                         ia.col() * B.cols() + ib.col(),
                         ia.value() * ib.value());
  Eigen::SparseMatrix<double> out(A.rows() * B.rows(), A.cols() * B.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Eigen::VectorXd seeded_vector(int n) {
  std::mt19937_64 rng(0x5eedb11ab5eedull);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = uniform_from_bits(rng(), -1.0, 1.0);
  return x;
}

// Sparse basis of {x : C^T x = 0} by Gaussian elimination with partial
// pivoting on C^T. Each basis column touches at most k+1 nodes, so the
// projected forms keep relative accuracy even where hat masses are ~e^{-40};
// a dense (QR) complement would mix those rows into everything and lose
// positive definiteness to absolute rounding.
Eigen::SparseMatrix<double> elimination_basis(const Eigen::MatrixXd& C) {
  const int n = static_cast<int>(C.rows()), k = static_cast<int>(C.cols());
  Eigen::MatrixXd W = C.transpose();  // k x n
  std::vector<int> pivot(k, -1);
  std::vector<bool> is_pivot(n, false);
  for (int r = 0; r < k; ++r) {
    int best = -1;
    double mag = 0.0;
    for (int j = 0; j < n; ++j)
      if (!is_pivot[j] && std::abs(W(r, j)) > mag) {
        mag = std::abs(W(r, j));
        best = j;
      }
    if (best < 0 || mag == 0.0)
      throw EigenFailure("constraint matrix is rank deficient");
    pivot[r] = best;
    is_pivot[best] = true;
    for (int r2 = 0; r2 < k; ++r2) {
      if (r2 == r) continue;
      double fac = W(r2, best) / W(r, best);
      if (fac != 0.0) W.row(r2) -= fac * W.row(r);
    }
  }
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) * (k + 1));
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    t.emplace_back(j, col, 1.0);
    for (int r = 0; r < k; ++r)
      t.emplace_back(pivot[r], col, -W(r, j) / W(r, pivot[r]));
    ++col;
  }
  Eigen::SparseMatrix<double> B(n, n - k);
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

// Constraint matrix: columns M*1 (=u) and M*v_j.
Eigen::MatrixXd constraint_matrix(const DiscretizedForms& df) {
  const int n = df.u.size();
  Eigen::MatrixXd C(n, 1 + static_cast<int>(df.extremisers.size()));
  C.col(0) = df.u;
  for (std::size_t j = 0; j < df.extremisers.size(); ++j)
    C.col(1 + j) = df.M * df.extremisers[j];
  return C;
}

}  // namespace

Eigen::VectorXd DiscretizedForms::interpolate(const TestFunction& f) const {
  if (dim != 1) throw DimensionCap("interpolate: 1D forms only");
  Eigen::VectorXd v(nx);
  for (int i = 0; i < nx; ++i) v[i] = f.f(mesh_x[i]);
  return v;
}

double DiscretizedForms::deficit_form(const Eigen::VectorXd& v) const {
  const double mean = u.dot(v);
  return v.dot(E * v) - (v.dot(M * v) - mean * mean);
}

double DiscretizedForms::mass_norm2(const Eigen::VectorXd& v) const {
  return v.dot(M * v);
}

double DiscretizedForms::beta_ratio(const Eigen::VectorXd& v, double s) const {
  double l1 = 0.0;
  for (int i = 0; i < v.size(); ++i) l1 += u[i] * std::abs(v[i]);
  const double en = v.dot(E * v);
  if (en < kWeightFloor) throw SingularWeight("beta_ratio: zero energy");
  return (v.dot(M * v) - s * l1 * l1) / en;
}

DiscretizedForms discretize_forms(const Measure& m, int mesh_size) {
  if (mesh_size < 64 || mesh_size > 8192)
    throw OutOfRange("1D mesh_size must lie in [64, 8192]");
  Forms1D f = assemble_1d(m, mesh_size);
  DiscretizedForms df;
  df.dim = 1;
  df.nx = mesh_size;
  df.mesh_x = std::move(f.mesh);
  df.E = std::move(f.E);
  df.M = std::move(f.M);
  df.u = std::move(f.u);
  df.extremisers.push_back(std::move(f.v));
  return df;
}

DiscretizedForms discretize_forms(const Measure& mx, const Measure& my, int nx,
                                  int ny) {
  if (nx < 32 || nx > 256 || ny < 32 || ny > 256)
    throw OutOfRange("2D mesh sizes must lie in [32, 256] per axis");
  Forms1D fx = assemble_1d(mx, nx);
  Forms1D fy = assemble_1d(my, ny);

  DiscretizedForms df;
  df.dim = 2;
  df.nx = nx;
  df.ny = ny;
  df.mesh_x = std::move(fx.mesh);
  df.mesh_y = std::move(fy.mesh);
  df.E = kron(fx.E, fy.M) + kron(fx.M, fy.E);
  df.M = kron(fx.M, fy.M);
  df.u = Eigen::VectorXd(nx * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) df.u[i * ny + j] = fx.u[i] * fy.u[j];
  Eigen::VectorXd e1(nx * ny), e2(nx * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      e1[i * ny + j] = fx.v[i];
      e2[i * ny + j] = fy.v[j];
    }
  df.extremisers.push_back(std::move(e1));
  df.extremisers.push_back(std::move(e2));
  return df;
}

double stability_eigenvalue(const DiscretizedForms& df) {
  const int n = df.u.size();
  Eigen::SparseMatrix<double> K = df.E + df.M;  // SPD shift of the pencil
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(K);
  if (llt.info() != Eigen::Success)
    throw EigenFailure("LLT factorisation of E + M failed");

  const Eigen::MatrixXd C = constraint_matrix(df);
  const Eigen::MatrixXd Zc = llt.solve(C);
  const Eigen::MatrixXd S = C.transpose() * Zc;
  const Eigen::LDLT<Eigen::MatrixXd> Sf(S);

  // Bordered solve: z = K^{-1}(rhs) corrected so that C^T z = 0 exactly;
  // this is projected inverse iteration for the constrained pencil.
  auto project_solve = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd z0 = llt.solve(rhs);
    Eigen::VectorXd alpha = Sf.solve(C.transpose() * z0);
    return Eigen::VectorXd(z0 - Zc * alpha);
  };

  Eigen::VectorXd x = seeded_vector(n);
  double nu = 0.0, nu_prev = -1.0;
  for (int it = 0; it < 400; ++it) {
    Eigen::VectorXd z = project_solve(df.M * x);
    double nrm = std::sqrt(std::max(z.dot(df.M * z), 1e-300));
    x = z / nrm;
    nu = x.dot(df.E * x) / x.dot(df.M * x);
    if (it > 4 && std::abs(nu - nu_prev) < 1e-13 * std::max(1.0, nu)) break;
    nu_prev = nu;
  }
  return nu - 1.0;  // on the constraint set the variance form equals M
}

double stability_eigenvalue_dense(const DiscretizedForms& df) {
  const int n = df.u.size();
  if (n > 2048) throw EigenFailure("dense path limited to 2048 unknowns");
  const Eigen::MatrixXd C = constraint_matrix(df);
  const int k = static_cast<int>(C.cols());
  Eigen::SparseMatrix<double> B = elimination_basis(C);

  // Flipped pencil (M, E + M): E x = nu M x <=> M x = eta (E+M) x with
  // nu = 1/eta - 1. E + M has a healthy diagonal after balancing, while M
  // alone is near-singular at the support edge.
  Eigen::SparseMatrix<double> K = df.E + df.M;
  Eigen::MatrixXd Mp =
      Eigen::MatrixXd(Eigen::SparseMatrix<double>(B.transpose() * df.M * B));
  Eigen::MatrixXd Kp =
      Eigen::MatrixXd(Eigen::SparseMatrix<double>(B.transpose() * K * B));
  Eigen::VectorXd s = Kp.diagonal().array().rsqrt();
  Eigen::MatrixXd Ms = s.asDiagonal() * Mp * s.asDiagonal();
  Eigen::MatrixXd Ks = s.asDiagonal() * Kp * s.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ms, Ks);
  if (es.info() != Eigen::Success) throw EigenFailure("dense eigensolve failed");
  double eta = es.eigenvalues()(n - k - 1);
  if (!(eta > 0.0)) throw EigenFailure("dense eigensolve produced eta <= 0");
  double nu = 1.0 / eta - 1.0;
  return nu - 1.0;
}

BetaEigenResult worst_beta_eigen(const DiscretizedForms& df, double s,
                                 int iters,
                                 const std::vector<Eigen::VectorXd>& seeds) {
  if (iters < 1) throw OutOfRange("worst_beta_eigen: iters >= 1");
  const int n = df.u.size();
  if (n > 2049) throw EigenFailure("adversary search limited to 2049 unknowns");

  const Eigen::MatrixXd Ed(df.E), Md(df.M);
  const Eigen::SparseMatrix<double> B = elimination_basis(df.u);
  Eigen::MatrixXd Ep =
      Eigen::MatrixXd(Eigen::SparseMatrix<double>(B.transpose() * df.E * B));
  const Eigen::MatrixXd Mp =
      Eigen::MatrixXd(Eigen::SparseMatrix<double>(B.transpose() * df.M * B));
  // Balance the energy form before the LLT inside the generalized solver;
  // its raw diagonal spans ~ e^{40} across the support.
  const Eigen::VectorXd bal = Ep.diagonal().array().rsqrt();
  Ep = bal.asDiagonal() * Ep * bal.asDiagonal();

  BetaEigenResult out;
  double best = -std::numeric_limits<double>::infinity();
  auto record = [&](const Eigen::VectorXd& f) {
    double en = f.dot(Ed * f);
    if (en < kWeightFloor) return;
    double r = df.beta_ratio(f, s);
    if (r > best) {
      best = r;
      out.witness = f;
    }
    out.trace.push_back(best);  // running maximum, non-decreasing by design
  };

  auto solve_for_sigma = [&](const Eigen::VectorXd& sigma) {
    Eigen::VectorXd c = sigma.cwiseProduct(df.u);
    Eigen::VectorXd cp = bal.cwiseProduct(Eigen::VectorXd(B.transpose() * c));
    Eigen::MatrixXd Ap = bal.asDiagonal() * Mp * bal.asDiagonal() -
                         s * cp * cp.transpose();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ap, Ep);
    if (es.info() != Eigen::Success)
      throw EigenFailure("adversary eigensolve failed");
    return Eigen::VectorXd(
        B * bal.cwiseProduct(es.eigenvectors().col(n - 2)).eval());
  };

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Ones(n));
  for (const auto& sd : seeds) {
    record(sd);
    starts.push_back(sd);
  }

  for (const auto& start : starts) {
    Eigen::VectorXd sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = start[i] >= 0.0 ? 1.0 : -1.0;
    for (int it = 0; it < iters; ++it) {
      Eigen::VectorXd f = solve_for_sigma(sigma);
      record(f);
      for (int i = 0; i < n; ++i) sigma[i] = f[i] >= 0.0 ? 1.0 : -1.0;
    }
  }
  if (out.trace.empty()) throw EmptyFamily("worst_beta_eigen: nothing recorded");
  out.beta_lower = std::max(best, 0.0);
  return out;
}

}  // namespace bllab
