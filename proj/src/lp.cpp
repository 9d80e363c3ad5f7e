#include "cclab/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace cclab {

const char* to_string(LpResult::Status s) {
  switch (s) {
    case LpResult::Optimal: return "optimal";
    case LpResult::Infeasible: return "infeasible";
    case LpResult::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

struct Tableau {
  MatX T;  // rows 0..m-1 constraints, row m objective; last column rhs
  std::vector<int> basis;
  int pivots = 0;

  int rows() const { return static_cast<int>(T.rows()) - 1; }
  int cols() const { return static_cast<int>(T.cols()) - 1; }

  void pivot(int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i < T.rows(); ++i)
      if (i != r && T(i, c) != 0.0) T.row(i) -= T(i, c) * T.row(r);
    basis[r] = c;
    ++pivots;
  }

  // Minimizes the objective row over columns < ncols. Returns false if unbounded.
  bool run(int ncols, double eps) {
    const int m = rows();
    for (int guard = 0; guard < 50000; ++guard) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j)
        if (T(m, j) < -eps) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) <= eps) continue;
        double ratio = T(i, cols()) / T(i, enter);
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && leave >= 0 && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::BadInput, "simplex exceeded its pivot budget");
  }
};

}  // namespace

LpResult solve_lp(const MatX& A, const VecX& b, const VecX& c, double eps) {
  const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n) throw Error(ErrorCode::BadInput, "LP dimensions disagree");
  Tableau t;
  t.T = MatX::Zero(m + 1, n + m + 1);
  for (int i = 0; i < m; ++i) {
    double s = b(i) < 0 ? -1.0 : 1.0;
    t.T.block(i, 0, 1, n) = s * A.row(i);
    t.T(i, n + i) = 1.0;
    t.T(i, n + m) = s * b(i);
    t.basis.push_back(n + i);
  }
  // Phase 1: minimize the sum of artificials.
  for (int i = 0; i < m; ++i) t.T.row(m) -= t.T.row(i);
  for (int i = 0; i < m; ++i) t.T(m, n + i) = 0.0;
  t.run(n + m, eps);
  LpResult res;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-t.T(m, n + m) > 1e3 * eps * scale) {
    res.status = LpResult::Infeasible;
    res.pivots = t.pivots;
    return res;
  }
  // Drive remaining artificials out; rows that stay artificial are redundant.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] >= n) {
      int j = 0;
      while (j < n && std::abs(t.T(i, j)) <= eps) ++j;
      if (j < n) t.pivot(i, j);
    }
    if (t.basis[i] < n) keep.push_back(i);
  }
  Tableau p;
  p.T = MatX::Zero(keep.size() + 1, n + 1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    p.T.block(k, 0, 1, n) = t.T.block(keep[k], 0, 1, n);
    p.T(k, n) = t.T(keep[k], n + m);
    p.basis.push_back(t.basis[keep[k]]);
  }
  p.pivots = t.pivots;
  const int mk = static_cast<int>(keep.size());
  p.T.block(mk, 0, 1, n) = c.transpose();
  for (int k = 0; k < mk; ++k) p.T.row(mk) -= c(p.basis[k]) * p.T.row(k);
  if (!p.run(n, eps)) {
    res.status = LpResult::Unbounded;
    res.pivots = p.pivots;
    return res;
  }
  res.status = LpResult::Optimal;
  res.x = VecX::Zero(n);
  for (int k = 0; k < mk; ++k) res.x(p.basis[k]) = p.T(k, n);
  res.objective = c.dot(res.x);
  res.pivots = p.pivots;
  return res;
}

}  // namespace cclab
