#include "fmcf/barrier_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fmcf/errors.hpp"

namespace fmcf::detail {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// Neighbour table: nb[a][i] = index of i + e_a.
struct Stencil {
  int dim;
  std::size_t m;
  double inv_h;
  std::array<std::vector<std::size_t>, 2> nb;

  explicit Stencil(const PeriodicGrid& grid)
      : dim(grid.dimension()), m(grid.size()), inv_h(1.0 / grid.spacing()) {
    for (int a = 0; a < dim; ++a) {
      nb[a].resize(m);
      for (std::size_t i = 0; i < m; ++i) nb[a][i] = grid.shift(i, a, 1);
    }
  }

  // Local vector K_i P into v[0..dim]; returns its norm.
  double local(const double* p, double c, std::size_t i, double* v) const {
    v[0] = c * p[i];
    double s = v[0] * v[0];
    for (int a = 0; a < dim; ++a) {
      v[a + 1] = (p[nb[a][i]] - p[i]) * inv_h;
      s += v[a + 1] * v[a + 1];
    }
    return std::sqrt(s);
  }

  double tv(const double* p, double c) const {
    double s = 0.0;
    double v[3];
    for (std::size_t i = 0; i < m; ++i) s += local(p, c, i, v);
    return s;
  }

  // out = sum_i K_i^T (K_i P / |K_i P|), unweighted.
  void kty(const double* p, double c, double* out) const {
    std::fill(out, out + m, 0.0);
    double v[3];
    for (std::size_t i = 0; i < m; ++i) {
      const double r = local(p, c, i, v);
      if (r == 0.0) continue;
      out[i] += c * v[0] / r;
      for (int a = 0; a < dim; ++a) {
        const double f = v[a + 1] / r * inv_h;
        out[i] -= f;
        out[nb[a][i]] += f;
      }
    }
  }
};

struct Certificate {
  double lower;
  double gap;
};

Certificate certify(const Stencil& st, const std::vector<double>& p, const std::vector<double>& g, double c,
                    double w) {
  std::vector<double> k(st.m);
  st.kty(p.data(), c, k.data());
  double lambda = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < st.m; ++j)
    if (g[j] > 0.0) lambda = std::min(lambda, k[j] / g[j]);
  bool feasible = std::isfinite(lambda);
  for (std::size_t j = 0; j < st.m && feasible; ++j) {
    if (g[j] < 0.0 && k[j] / g[j] > lambda) feasible = false;
    if (g[j] == 0.0 && k[j] < 0.0) feasible = false;
  }
  const double obj = w * st.tv(p.data(), c);
  if (!feasible) return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  return {lambda, std::max(0.0, obj - lambda)};
}

// Orthonormal basis of the complement of the unit vector u in R^n (n = 2 or 3).
int perp_basis(const double* u, int n, double out[2][3]) {
  if (n == 2) {
    out[0][0] = -u[1];
    out[0][1] = u[0];
    return 1;
  }
  int k = 0;
  for (int q = 1; q < 3; ++q)
    if (std::abs(u[q]) < std::abs(u[k])) k = q;
  double e[3] = {0.0, 0.0, 0.0};
  e[k] = 1.0;
  double v[3], s = 0.0;
  for (int q = 0; q < 3; ++q) {
    v[q] = e[q] - u[k] * u[q];
    s += v[q] * v[q];
  }
  s = std::sqrt(s);
  for (int q = 0; q < 3; ++q) out[0][q] = v[q] / s;
  out[1][0] = u[1] * out[0][2] - u[2] * out[0][1];
  out[1][1] = u[2] * out[0][0] - u[0] * out[0][2];
  out[1][2] = u[0] * out[0][1] - u[1] * out[0][0];
  return 2;
}

double curvature(const Stencil& st, const std::vector<double>& p, const double* dp, double c, double mu, double w) {
  double sum = 0.0;
  double v[3], z[3];
  for (std::size_t i = 0; i < st.m; ++i) {
    const double r = st.local(p.data(), c, i, v);
    st.local(dp, c, i, z);
    double uz = 0.0;
    for (int q = 0; q <= st.dim; ++q) uz += v[q] / r * z[q];
    double perp = 0.0;
    for (int q = 0; q <= st.dim; ++q) {
      const double d = z[q] - uz * v[q] / r;
      perp += d * d;
    }
    sum += perp / r + mu * dp[i] * dp[i] / (p[i] * p[i]);
  }
  return w * sum;
}

void normalize(std::vector<double>& p, const std::vector<double>& g, double w) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += g[i] * p[i];
  s *= w;
  if (s > 0.0)
    for (double& x : p) x /= s;
}

}  // namespace

double weighted_tv(const PeriodicGrid& grid, const std::vector<double>& p, double c) {
  const Stencil st(grid);
  return grid.cell_volume() * st.tv(p.data(), c);
}

BarrierResult solve_barrier(const PeriodicGrid& grid, const std::vector<double>& g, double c,
                            const BarrierOptions& opts) {
  const Stencil st(grid);
  const std::size_t m = st.m;
  const double w = grid.cell_volume();
  const int dim = st.dim;
  const int ncol = dim + 1;

  std::vector<double> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = std::max(g[i], 0.0) + 0.1;
  normalize(p, g, w);

  auto barrier_obj = [&](const std::vector<double>& q, double mu) {
    double logs = 0.0;
    for (double x : q) logs += std::log(x);
    return w * st.tv(q.data(), c) - mu * w * logs;
  };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m * (ncol * ncol + 3));
  SpMat kkt(static_cast<Eigen::Index>(m + 1), static_cast<Eigen::Index>(m + 1));
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;

  Vec grad(m), rhs(m + 1);
  std::vector<double> trial(m);
  double mu = 0.1 * w * st.tv(p.data(), c);
  int newton = 0;
  BarrierResult best{p, 0.0, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0,
                     false};

  while (true) {
    double prev_dec = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200 && newton < opts.max_newton; ++it) {
      trip.clear();
      grad.setZero();
      for (std::size_t i = 0; i < m; ++i) {
        double v[3];
        const double r = st.local(p.data(), c, i, v);
        double u[3];
        for (int q = 0; q < ncol; ++q) u[q] = v[q] / r;
        // Columns touched by K_i: i, then i + e_a.
        std::size_t cols[3] = {i, 0, 0};
        double b[3][3] = {};  // b[component][column]
        b[0][0] = c;
        for (int a = 0; a < dim; ++a) {
          cols[a + 1] = st.nb[a][i];
          b[a + 1][0] = -st.inv_h;
          b[a + 1][a + 1] = st.inv_h;
        }
        for (int col = 0; col < ncol; ++col) {
          double s = 0.0;
          for (int q = 0; q < ncol; ++q) s += b[q][col] * u[q];
          grad[static_cast<Eigen::Index>(cols[col])] += w * s;
        }
        // Local Hessian B^T (I - u u^T) B / r, assembled as sum_k (B^T e_k)(B^T e_k)^T / r
        // over an orthonormal basis e_k of u-perp so it stays positive semidefinite.
        double perp[2][3];
        const int nperp = perp_basis(u, ncol, perp);
        double bp[2][3];
        for (int k = 0; k < nperp; ++k)
          for (int col = 0; col < ncol; ++col) {
            bp[k][col] = 0.0;
            for (int q = 0; q < ncol; ++q) bp[k][col] += b[q][col] * perp[k][q];
          }
        for (int c1 = 0; c1 < ncol; ++c1) {
          for (int c2 = 0; c2 < ncol; ++c2) {
            double acc = 0.0;
            for (int k = 0; k < nperp; ++k) acc += bp[k][c1] * bp[k][c2];
            trip.emplace_back(static_cast<int>(cols[c1]), static_cast<int>(cols[c2]), w * acc / r);
          }
        }
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i), mu * w / (p[i] * p[i]));
        trip.emplace_back(static_cast<int>(i), static_cast<int>(m), w * g[i]);
        trip.emplace_back(static_cast<int>(m), static_cast<int>(i), w * g[i]);
        grad[static_cast<Eigen::Index>(i)] -= mu * w / p[i];
      }
      trip.emplace_back(static_cast<int>(m), static_cast<int>(m), 0.0);
      kkt.setFromTriplets(trip.begin(), trip.end());
      if (!analyzed) {
        lu.analyzePattern(kkt);
        analyzed = true;
      }
      lu.factorize(kkt);
      if (lu.info() != Eigen::Success) throw SolverError("KKT factorization failed", best.gap);

      double constraint = 0.0;
      for (std::size_t i = 0; i < m; ++i) constraint += g[i] * p[i];
      rhs.head(static_cast<Eigen::Index>(m)) = -grad;
      rhs[static_cast<Eigen::Index>(m)] = 1.0 - w * constraint;
      const Vec sol = lu.solve(rhs);
      const Vec dp = sol.head(static_cast<Eigen::Index>(m));
      // dp^T H dp as a sum of squares, free of the cancellation in -grad^T dp.
      const double dec = curvature(st, p, dp.data(), c, mu, w);
      ++newton;
      if (!std::isfinite(dec)) throw SolverError("non-finite Newton decrement", best.gap);
      if (dec < 1e-26 || (it > 0 && dec >= prev_dec && dec < 1e-16)) break;
      prev_dec = dec;

      double alpha = 1.0;
      for (std::size_t i = 0; i < m; ++i)
        if (dp[static_cast<Eigen::Index>(i)] < 0.0)
          alpha = std::min(alpha, 0.99 * (-p[i] / dp[static_cast<Eigen::Index>(i)]));
      if (dec > 1e-12) {
        const double f0 = barrier_obj(p, mu);
        while (alpha > 1e-12) {
          for (std::size_t i = 0; i < m; ++i) trial[i] = p[i] + alpha * dp[static_cast<Eigen::Index>(i)];
          if (barrier_obj(trial, mu) <= f0 - 1e-4 * alpha * dec) break;
          alpha *= 0.5;
        }
      }
      for (std::size_t i = 0; i < m; ++i) p[i] += alpha * dp[static_cast<Eigen::Index>(i)];
    }

    std::vector<double> q = p;
    normalize(q, g, w);
    const Certificate cert = certify(st, q, g, c, w);
    if (cert.gap < best.gap || !std::isfinite(best.gap)) {
      best.psi = q;
      best.objective = w * st.tv(q.data(), c);
      best.lower_bound = cert.lower;
      best.gap = cert.gap;
    }
    best.newton_steps = newton;
    if (cert.gap < opts.tol_gap) {
      best.converged = true;
      return best;
    }
    if (mu < opts.mu_floor || newton >= opts.max_newton) return best;
    mu /= 10.0;
  }
}

}  // namespace fmcf::detail
