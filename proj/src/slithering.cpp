#include "cclab/slithering.hpp"

#include <cmath>

namespace cclab {

LeafFlags reversed(const LeafFlags& g) { return {g.plus, g.minus, g.id.empty() ? g.id : g.id + "~"}; }

namespace {

Flag act_flag(const Mat3& A, const Mat3& Ainv, const Flag& f) {
  Flag out;
  out.point = canonical(Vec3(A * f.point));
  out.line = canonical(Eigen::VectorXd((f.line * Ainv).transpose())).transpose();
  return out;
}

// Columns e1 = flag point, e2 in the flag plane, e3 off it.
Mat3 adapted_basis(const Flag& f) {
  Mat3 B;
  B.col(0) = f.point;
  Vec3 n = f.line.transpose();
  Vec3 e2 = n.cross(f.point);
  if (e2.norm() < tol().rank_eps) throw Error(ErrorCode::DegenerateBasis, "flag point is off its plane");
  B.col(1) = e2.normalized();
  B.col(2) = n.normalized();
  return B;
}

// In adapted coordinates: the unipotent upper-triangular n with n.(e3, <e2,e3>) = G.
Mat3 opposite_chart(const Mat3& B, const Mat3& Binv, const Flag& G) {
  Vec3 q = Binv * G.point;
  Covec3 mu = G.line * B;
  if (std::abs(q(2)) < tol().rank_eps * q.norm() || std::abs(mu(0)) < tol().rank_eps * mu.norm())
    throw Error(ErrorCode::NonTransverse, "flags are not transverse");
  Mat3 n = Mat3::Identity();
  n(0, 2) = q(0) / q(2);
  n(1, 2) = q(1) / q(2);
  n(0, 1) = -mu(1) / mu(0);
  return n;
}

}  // namespace

LeafFlags act(const Mat3& A, const LeafFlags& g) {
  Mat3 Ai = A.inverse();
  return {act_flag(A, Ai, g.minus), act_flag(A, Ai, g.plus), g.id};
}

LeafFlags axis_flags(const HitchinRep& rho, const Word& w) {
  Mat3 A = rho(w), Ai = rho(inverse(w));
  return {attracting_flag(Ai, A), attracting_flag(A, Ai), "axis " + to_string(w)};
}

LeafFlags spiral_leaf_flags(const HitchinRep& rho, const SpiralConfig& s, const Word& g) {
  Mat3 K = rho(s.connector), Ki = rho(inverse(s.connector));
  LeafFlags m;
  m.minus = attracting_flag(rho(inverse(s.c1)), rho(s.c1));
  m.plus = act_flag(K, Ki, attracting_flag(rho(inverse(s.c2)), rho(s.c2)));
  m.id = "m";
  if (g.empty()) return m;
  Mat3 G = rho(g), Gi = rho(inverse(g));
  return {act_flag(G, Gi, m.minus), act_flag(G, Gi, m.plus), to_string(g) + ".m"};
}

bool same_flag(const Flag& a, const Flag& b, double eps) {
  return proj_dist(a.point, b.point) < eps && proj_dist(a.line.transpose(), b.line.transpose()) < eps;
}

SharedEnd find_shared(const LeafFlags& g, const LeafFlags& h, double eps) {
  if (same_flag(g.minus, h.minus, eps)) return SharedEnd::MinusMinus;
  if (same_flag(g.plus, h.plus, eps)) return SharedEnd::PlusPlus;
  if (same_flag(g.minus, h.plus, eps)) return SharedEnd::MinusPlus;
  if (same_flag(g.plus, h.minus, eps)) return SharedEnd::PlusMinus;
  throw Error(ErrorCode::NoSharedEndpoint, "leaves " + g.id + " and " + h.id + " are not asymptotic");
}

SlitheringMap elementary_slither(const LeafFlags& g, const LeafFlags& h, SharedEnd shared) {
  const bool g_minus = shared == SharedEnd::MinusMinus || shared == SharedEnd::MinusPlus;
  const bool h_minus = shared == SharedEnd::MinusMinus || shared == SharedEnd::PlusMinus;
  const Flag& F = g_minus ? g.minus : g.plus;
  const Flag& Fh = h_minus ? h.minus : h.plus;
  if (!same_flag(F, Fh, 1e-9))
    throw Error(ErrorCode::NoSharedEndpoint, "tagged ends of " + g.id + " and " + h.id + " differ");
  const Flag& Gf = g_minus ? g.plus : g.minus;
  const Flag& Hf = h_minus ? h.plus : h.minus;
  Mat3 B = adapted_basis(F), Bi = B.inverse();
  Mat3 ng = opposite_chart(B, Bi, Gf), nh = opposite_chart(B, Bi, Hf);
  Mat3 ngi = Mat3::Identity();  // inverse of a unipotent upper-triangular matrix, exactly
  ngi(0, 1) = -ng(0, 1);
  ngi(1, 2) = -ng(1, 2);
  ngi(0, 2) = ng(0, 1) * ng(1, 2) - ng(0, 2);
  SlitheringMap s;
  s.M = B * nh * ngi * Bi;
  s.source = g.id;
  s.target = h.id;
  return s;
}

SlitheringMap elementary_slither(const LeafFlags& g, const LeafFlags& h) {
  return elementary_slither(g, h, find_shared(g, h));
}

SlitheringMap chain_slither(const std::vector<LeafFlags>& chain) {
  if (chain.empty()) throw Error(ErrorCode::BadInput, "empty chain");
  SlitheringMap s;
  s.source = chain.front().id;
  s.target = chain.back().id;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) s.M = elementary_slither(chain[i], chain[i + 1]).M * s.M;
  return s;
}

SpiralChain spiral_slither(const LeafFlags& g0, const Mat3& C, const Mat3& Cinv, double eps, int max_steps) {
  SpiralChain out;
  out.total.source = g0.id;
  out.total.target = g0.id + " limit";
  LeafFlags cur = g0;
  const SharedEnd e = find_shared(g0, act(C, g0));
  if (e != SharedEnd::MinusMinus && e != SharedEnd::PlusPlus)
    throw Error(ErrorCode::BadInput, "rho(c) reverses the leaf");
  const bool minus_fixed = e == SharedEnd::MinusMinus;
  std::vector<double> ratios;
  for (int k = 0; k < max_steps; ++k) {
    // Only the free end is transported: pushing the fixed flag by C amplifies rounding.
    LeafFlags next = cur;
    Flag& moving = minus_fixed ? next.plus : next.minus;
    moving = act_flag(C, Cinv, moving);
    Mat3 M = elementary_slither(cur, next, e).M;
    double d = (M - Mat3::Identity()).norm();
    out.total.M = M * out.total.M;
    out.factor_norms.push_back(d);
    if (out.factor_norms.size() >= 2 && out.factor_norms[k - 1] > 0) ratios.push_back(d / out.factor_norms[k - 1]);
    out.steps = k + 1;
    cur = next;
    if (ratios.size() >= 5) {
      double r = 0;
      for (std::size_t i = ratios.size() - 5; i < ratios.size(); ++i) r = std::max(r, ratios[i]);
      out.decay_ratio = r;
      if (r >= 1.0) throw Error(ErrorCode::NonConvergentTail, "slithering factors stopped decaying");
      // Remaining factors multiply the product by I + O(d r / (1 - r)).
      double tail = d * r / (1.0 - r);
      out.tail_estimate = tail * out.total.M.norm();
      if (tail < eps) return out;
    }
  }
  throw Error(ErrorCode::NonConvergentTail, "spiral chain did not converge in " + std::to_string(max_steps) + " steps");
}

double triple_ratio(const Flag& a, const Flag& b, const Flag& c) {
  double num = a.line.dot(b.point.transpose()) * b.line.dot(c.point.transpose()) * c.line.dot(a.point.transpose());
  double den = a.line.dot(c.point.transpose()) * b.line.dot(a.point.transpose()) * c.line.dot(b.point.transpose());
  if (std::abs(den) < tol().rank_eps * tol().rank_eps) throw Error(ErrorCode::NonTransverse, "degenerate triple");
  return num / den;
}

TriangleHolonomy triangle_holonomy(const LeafFlags& x, const LeafFlags& y, const LeafFlags& z) {
  TriangleHolonomy t;
  t.composite = elementary_slither(y, x).M * elementary_slither(z, y).M * elementary_slither(x, z).M;
  t.square_distance = (t.composite * t.composite - Mat3::Identity()).norm();
  // Vertices: the ends shared by consecutive sides.
  auto shared_flag = [](const LeafFlags& g, const LeafFlags& h) -> const Flag& {
    SharedEnd e = find_shared(g, h);
    return e == SharedEnd::MinusMinus || e == SharedEnd::MinusPlus ? g.minus : g.plus;
  };
  t.triple_ratio = triple_ratio(shared_flag(x, y), shared_flag(y, z), shared_flag(z, x));
  return t;
}

TriangleHolonomy triangle_holonomy(const HitchinRep& rho, const Word& u, const Word& v, const Word& w) {
  Flag A = attracting_flag(rho(u), rho(inverse(u)));
  Flag B = attracting_flag(rho(v), rho(inverse(v)));
  Flag C = attracting_flag(rho(w), rho(inverse(w)));
  return triangle_holonomy(LeafFlags{A, B, "AB"}, LeafFlags{B, C, "BC"}, LeafFlags{C, A, "CA"});
}

Vec3 middle_line(const LeafFlags& g) {
  Vec3 v = g.minus.line.transpose().cross(Vec3(g.plus.line.transpose()));
  if (v.norm() < tol().rank_eps) throw Error(ErrorCode::NonTransverse, "leaf flags share a plane");
  return v.normalized();
}

double loop_character(const HitchinRep& rho, const TrackLoop& loop) {
  if (loop.chain.empty()) throw Error(ErrorCode::BadInput, "loop " + loop.id + " has no leaves");
  const LeafFlags& first = loop.chain.front();
  const LeafFlags& last = loop.chain.back();
  // Compare each end in the direction where gamma contracts errors: forward near the
  // attracting point, backward near the repelling one.
  LeafFlags image = act(rho(loop.gamma), first), preimage = act(rho(inverse(loop.gamma)), last);
  auto closes = [](const Flag& a, const Flag& b, const Flag& c, const Flag& d) {
    return same_flag(a, b, 1e-8) || same_flag(c, d, 1e-8);
  };
  if (!closes(image.minus, last.minus, preimage.minus, first.minus) ||
      !closes(image.plus, last.plus, preimage.plus, first.plus))
    throw Error(ErrorCode::InconsistentCombinatorics, "loop " + loop.id + " does not close up under gamma");
  Vec3 v = middle_line(first);
  Vec3 w = chain_slither(loop.chain).M * v;
  Vec3 u = rho(loop.gamma) * v;
  return w.dot(u) / u.dot(u);
}

HolonomyCharacter slither_character(const HitchinRep& rho, const std::vector<TrackLoop>& loops) {
  HolonomyCharacter chi;
  for (const TrackLoop& l : loops) chi.values[l.id] = loop_character(rho, l);
  return chi;
}

TrackLoop closed_leaf_loop(const HitchinRep& rho, const Word& c, const std::string& id) {
  LeafFlags a = axis_flags(rho, c);
  return {id, c, {a}};
}

std::vector<TrackLoop> spiral_track_loops(const HitchinRep& rho, const SpiralConfig& s) {
  // m and c1.m share the end at the repelling point of c1; k^-1 m and c2 k^-1 m share
  // the repelling point of c2.
  LeafFlags m = spiral_leaf_flags(rho, s);
  LeafFlags c1m = spiral_leaf_flags(rho, s, s.c1);
  Word ki = inverse(s.connector);
  LeafFlags km = spiral_leaf_flags(rho, s, ki);
  LeafFlags c2km = spiral_leaf_flags(rho, s, concat(s.c2, ki));
  return {{"c1", s.c1, {m, c1m}}, {"c2", s.c2, {km, c2km}}};
}

nlohmann::json to_json(const HolonomyCharacter& chi) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : chi.values) j[k] = v;
  return j;
}

}  // namespace cclab
