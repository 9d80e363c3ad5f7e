#include "cclab/flow.hpp"

#include <cmath>
#include <iomanip>
#include <random>

namespace cclab {

double NormChoice::operator()(const Vec3& x) const { return std::sqrt(x.dot(Q * x)); }

NormChoice random_norm(unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  Mat3 A;
  for (int i = 0; i < 9; ++i) A(i / 3, i % 3) = nd(gen);
  NormChoice n;
  n.Q = A * A.transpose() + 0.1 * Mat3::Identity();
  return n;
}

GrowthTrace g_along_closed(const HitchinRep& rho, const Word& w, int n, const NormChoice& norm,
                           const std::optional<Vec3>& x) {
  if (w.empty()) throw Error(ErrorCode::BadInput, "closed leaf needs a nonempty word");
  EigenBasis3 e = eigen_basis(rho(w), rho(inverse(w)));
  Vec3 v = e.V.col(1);
  if (x) {
    double c = (e.V.inverse() * *x)(1);
    if (std::abs(c) < tol().rank_eps * x->norm())
      throw Error(ErrorCode::DegenerateBasis, "vector has no E2 component");
    v = c * e.V.col(1);
  }
  GrowthTrace tr;
  tr.word = w;
  tr.label = "closed " + to_string(w);
  const double l = static_cast<double>(w.size());
  const double step = std::log(std::abs(e.values(1)));
  const double base = norm(v);
  for (int k = 0; k <= std::abs(n); ++k) {
    int s = n >= 0 ? k : -k;
    tr.t.push_back(s * l);
    // rho(w)^s v = L2^s v, so only the scale changes.
    tr.logG.push_back(s * step + std::log(norm(v) / base));
  }
  return tr;
}

GrowthTrace g_along_word(const HitchinRep& rho, const Word& w, const Vec3& x, const NormChoice& norm) {
  GrowthTrace tr;
  tr.word = w;
  tr.label = "word " + to_string(w);
  Vec3 y = x;
  const double base = norm(x);
  double acc = 0;
  tr.t.push_back(0);
  tr.logG.push_back(0);
  for (int k = static_cast<int>(w.size()) - 1, step = 1; k >= 0; --k, ++step) {
    int l = w.letters[k];
    int g = std::abs(l) - 1;
    Vec3 z = (l > 0 ? rho.images[g] : rho.inverses[g]) * y;
    // Renormalize to keep long traces finite.
    double r = z.norm();
    acc += std::log(r);
    y = z / r;
    tr.t.push_back(step);
    tr.logG.push_back(acc + std::log(norm(y) / base));
  }
  return tr;
}

LambdaPair lambda_estimates(const GrowthTrace& trace) {
  const int n = static_cast<int>(trace.t.size());
  if (n < 10) throw Error(ErrorCode::InsufficientData, "lambda estimates need at least 10 samples");
  int start = n / 2;
  if (n - 1 - start < 10) start = std::max(0, n - 11);
  LambdaPair p{-INFINITY, INFINITY};
  for (int i = start; i + 1 < n; ++i) {
    double dt = trace.t[i + 1] - trace.t[i];
    if (dt == 0) throw Error(ErrorCode::BadInput, "repeated sample time");
    double s = (trace.logG[i + 1] - trace.logG[i]) / dt;
    p.plus = std::max(p.plus, s);
    p.minus = std::min(p.minus, s);
  }
  return p;
}

Verdict criterion_check(const HitchinRep& rho, const Word& closed_leaf) {
  Verdict v;
  LambdaPair f = lambda_estimates(g_along_closed(rho, closed_leaf, 20));
  LambdaPair b = lambda_estimates(g_along_closed(rho, inverse(closed_leaf), 20));
  v.forward_slope = f.plus;
  v.backward_slope = b.plus;
  double logl2 = std::log(middle_eigen_data(rho, closed_leaf).l2);
  v.bendable = std::abs(logl2) <= tol().rank_eps;
  v.note = "log Lambda_2 = " + std::to_string(logl2);
  return v;
}

Verdict criterion_check(const HitchinRep& rho, const SpiralConfig& spiral) {
  Verdict v;
  v.forward_slope = lambda_estimates(g_along_closed(rho, inverse(spiral.c1), 20)).plus;
  v.backward_slope = lambda_estimates(g_along_closed(rho, inverse(spiral.c2), 20)).plus;
  v.bendable = v.forward_slope <= tol().rank_eps && v.backward_slope <= tol().rank_eps;
  v.note = v.bendable ? "both tails decay" : "a tail grows along the spiral";
  return v;
}

AtomicEquivariantMeasure atomic_measure_from_spiral(const HitchinRep& rho, const SpiralConfig& spiral,
                                                    double first_weight, int crossings) {
  if (first_weight <= 0) throw Error(ErrorCode::BadInput, "first weight must be positive");
  if (crossings < 1) throw Error(ErrorCode::BadInput, "need at least one crossing");
  AtomicEquivariantMeasure mu;
  const Word cs[2] = {spiral.c1, spiral.c2};
  for (int side = 0; side < 2; ++side) {
    double L = middle_eigen_data(rho, cs[side]).l2;
    if (L <= 1.0 + tol().rank_eps)
      throw Error(ErrorCode::NonSummable, "Lambda_2(" + to_string(cs[side]) + ") = " + std::to_string(L) +
                                              ": the mass escapes onto the closed leaf");
    for (int j = 0; j < crossings; ++j) mu.atoms.push_back({side + 1, j, first_weight * std::pow(L, -j)});
    for (std::size_t i = mu.atoms.size() - crossings; i + 1 < mu.atoms.size(); ++i) {
      double r = std::abs(mu.atoms[i + 1].weight - mu.atoms[i].weight / L) / mu.atoms[i + 1].weight;
      mu.recursion_residual = std::max(mu.recursion_residual, r);
    }
    mu.side_mass[side] = first_weight / (1.0 - 1.0 / L);
  }
  mu.total_mass = mu.side_mass[0] + mu.side_mass[1];
  return mu;
}

void write_csv(std::ostream& os, const GrowthTrace& trace) {
  os << "t,logG\n" << std::setprecision(17);
  for (std::size_t i = 0; i < trace.t.size(); ++i) os << trace.t[i] << ',' << trace.logG[i] << '\n';
}

}  // namespace cclab
