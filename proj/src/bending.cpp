#include "cclab/bending.hpp"

#include <cmath>
#include <map>

namespace cclab {

SpiralConfig default_spiral() { return {parse_word("b2"), parse_word("b2"), parse_word("a2")}; }

SpiralConfig reversed(const SpiralConfig& s) { return {inverse(s.c1), inverse(s.c2), s.connector}; }

namespace {

void check_convergent(const EigenBasis3& c, const Covec3& beta) {
  if (c.values(1) <= 1.0 + tol().rank_eps)
    throw Error(ErrorCode::Divergent, "middle eigenvalue " + std::to_string(c.values(1)) +
                                          " <= 1: the tail runs against the orientation");
  if (std::abs(beta(2)) > tol().rank_eps * std::max(beta.norm(), 1e-300))
    throw Error(ErrorCode::Divergent, "translation does not vanish on the repelling eigenvector");
}

}  // namespace

double tail_constant(const EigenBasis3& c, const Covec3& tau) {
  Covec3 beta = tau * c.V;
  return (std::abs(beta(0)) + std::abs(beta(1))) * c.V.inverse().norm();
}

Covec3 tail_closed_form(const EigenBasis3& c, const Covec3& tau, int N0) {
  Covec3 beta = tau * c.V;
  check_convergent(c, beta);
  Covec3 s = Covec3::Zero();  // the repelling component is zero by hypothesis
  for (int i = 0; i < 2; ++i) {
    double r = 1.0 / c.values(i);
    s(i) = beta(i) * std::pow(r, N0) / (1.0 - r);
  }
  return s * c.V.inverse();
}

RegionSum geometric_tail_sum(const EigenBasis3& c, const Covec3& tau, int N) {
  if (N < 0) throw Error(ErrorCode::BadInput, "N must be non-negative");
  Covec3 beta = tau * c.V;
  check_convergent(c, beta);
  beta(2) = 0;
  RegionSum r;
  r.n_terms = N;
  r.closed_form = tail_closed_form(c, tau, 1);
  Mat3 Vi = c.V.inverse();
  Covec3 acc = Covec3::Zero(), term = beta;
  for (int n = 1; n <= N; ++n) {
    for (int i = 0; i < 3; ++i) term(i) /= c.values(i);
    acc += term;
  }
  r.B.tau = acc * Vi;
  double L2 = c.values(1);
  r.bound = tail_constant(c, tau) * std::pow(L2, -N) / (1.0 - 1.0 / L2);
  return r;
}

namespace {

Vec3 origin() { return klein_basepoint(); }

Chord move(const Mat2& g, const Chord& c) { return {mobius(g, c.first), mobius(g, c.second)}; }

bool same_point(const BoundaryPoint& a, const BoundaryPoint& b, double eps) {
  return angular_distance(a, b) < eps;
}

// x strictly inside the arc from a to b that avoids z.
bool in_arc_avoiding(const BoundaryPoint& x, const BoundaryPoint& a, const BoundaryPoint& b,
                     const BoundaryPoint& z) {
  auto ccw = [](double from, double to) { return normalize_angle(to - from); };
  bool z_in_ccw = ccw(a.angle, z.angle) < ccw(a.angle, b.angle);
  double len = z_in_ccw ? ccw(b.angle, a.angle) : ccw(a.angle, b.angle);
  double pos = z_in_ccw ? ccw(b.angle, x.angle) : ccw(a.angle, x.angle);
  return pos > 0 && pos < len;
}

Mat2 power2(const Mat2& A, const Mat2& Ai, int n) {
  Mat2 P = Mat2::Identity();
  const Mat2& B = n >= 0 ? A : Ai;
  for (int i = 0; i < std::abs(n); ++i) {
    P = P * B;
    P /= std::sqrt(std::abs(P.determinant()));
  }
  return P;
}

Mat3 power3(const Mat3& A, int n) {
  Mat3 P = Mat3::Identity();
  for (int i = 0; i < n; ++i) P = P * A;
  return P;
}

struct Family {
  Word c;
  Mat2 C, Ci;
  Chord axis;        // attracting, repelling
  EigenBasis3 eig;   // of rho(c)
  Covec3 beta;       // leaf covector of the family's base leaf in the eigenbasis of rho(c)
};

struct Geometry {
  BendingInput in;
  Chord m;
  Mat2 K, Ki;
  Family fam[2];
  Covec3 alpha_m;  // vanishes on xi(m-) and xi(m+)
  Vec3 P0;
  ConeChart chart;
  std::map<int, std::vector<std::pair<Word, Mat2>>> balls;

  const std::vector<std::pair<Word, Mat2>>& ball(int r) {
    auto it = balls.find(r);
    if (it != balls.end()) return it->second;
    std::vector<std::pair<Word, Mat2>> b;
    for (const Word& w : group_ball(in.rho.fuchsian, r)) b.push_back({w, in.rho.fuchsian(w)});
    return balls[r] = b;
  }

  // Lift (u, f, n): family 1 is u c1^n m, family 2 is u c2^n k^-1 m.
  Chord chord(const Mat2& U, int f, int n) const {
    const Family& F = fam[f];
    Mat2 g = U * power2(F.C, F.Ci, n);
    if (f == 0) return {mobius(U, m.first), mobius(g, m.second)};
    return {mobius(Mat2(g * Ki), m.first), mobius(Mat2(U * Ki), m.second)};
  }

  // Unsigned covector rho(u c^n [k^-1]).alpha_m.
  Covec3 covector(const Word& u, int f, int n) const {
    const Family& F = fam[f];
    Covec3 b = F.beta;
    for (int i = 0; i < 3; ++i) b(i) *= std::pow(F.eig.values(i), -n);
    return b * F.eig.V.inverse() * in.rho(inverse(u));
  }

  Covec3 signed_cov(const Covec3& c) const { return c.dot(P0.transpose()) > 0 ? Covec3(-c) : c; }
};

Geometry make_geometry(const BendingInput& in) {
  Geometry G;
  G.in = in;
  const FuchsianRep& F = in.rho.fuchsian;
  const SpiralConfig& s = in.spiral;
  G.m = spiral_leaf(F, s);
  G.K = F(s.connector);
  G.Ki = F(inverse(s.connector));
  const Word cs[2] = {s.c1, s.c2};
  for (int f = 0; f < 2; ++f) {
    Family& fa = G.fam[f];
    fa.c = cs[f];
    fa.C = F(cs[f]);
    fa.Ci = F(inverse(cs[f]));
    fa.axis = axis_endpoints(fa.C);
    fa.eig = eigen_basis(in.rho(cs[f]), in.rho(inverse(cs[f])));
  }
  // xi(m-) is the repelling flag of c1, xi(m+) = rho(k) xi(c2-).
  Mat3 Rk = in.rho(s.connector);
  Flag fm, fp;
  fm.point = G.fam[0].eig.V.col(2);
  fm.line = canonical(Eigen::VectorXd(G.fam[0].eig.V.col(2).cross(G.fam[0].eig.V.col(1)))).transpose();
  Vec3 q3 = Rk * G.fam[1].eig.V.col(2), q2 = Rk * G.fam[1].eig.V.col(1);
  fp.point = canonical(q3);
  fp.line = canonical(Eigen::VectorXd(q3.cross(q2))).transpose();
  G.alpha_m = leaf_covector(fm, fp);
  G.fam[0].beta = G.alpha_m * G.fam[0].eig.V;
  G.fam[1].beta = G.alpha_m * Rk * G.fam[1].eig.V;
  // alpha_m vanishes on both repelling eigenvectors; the rounding residue would be
  // amplified by L3^-n along the tails.
  for (Family& fa : G.fam) {
    if (std::abs(fa.beta(2)) > 1e3 * tol().rel_eps * fa.beta.norm())
      throw Error(ErrorCode::DegenerateBasis, "leaf covector does not vanish on the repelling eigenvector");
    fa.beta(2) = 0;
  }
  if (s.c1 == s.c2) {
    // Both tails accumulate on the same lifts; they must come from opposite sides.
    Chord ax = G.fam[0].axis;
    Vec3 n = klein_boundary(ax.first).cross(klein_boundary(ax.second));
    double s1 = n.dot(klein_boundary(G.m.second));
    double s2 = n.dot(klein_boundary(mobius(G.Ki, G.m.first)));
    if (s1 * s2 > 0)
      throw Error(ErrorCode::Unsupported, "with c1 = c2 the two ends of m must approach from opposite sides");
  }
  G.chart = cone_chart(in.rho, 4);

  // Base point: centroid of the endpoints of leaves visible from the origin.
  struct Cand {
    Chord chord;
    Vec3 x1, x2;
  };
  std::vector<Cand> cands;
  const Vec3 o = origin();
  for (const auto& [u, U] : G.ball(2)) {
    Mat3 Ru = in.rho(u);
    for (int f = 0; f < 2; ++f) {
      const Family& fa = G.fam[f];
      cands.push_back({move(U, fa.axis), Ru * fa.eig.V.col(0), Ru * fa.eig.V.col(2)});
      for (int n = -4; n <= 4; ++n) {
        Mat3 Cn = n >= 0 ? power3(in.rho(fa.c), n) : power3(in.rho(inverse(fa.c)), -n);
        Cand c;
        c.chord = G.chord(U, f, n);
        if (f == 0) {
          c.x1 = Ru * G.fam[0].eig.V.col(2);
          c.x2 = Ru * Cn * Rk * G.fam[1].eig.V.col(2);
        } else {
          c.x1 = Ru * Cn * in.rho(inverse(s.connector)) * G.fam[0].eig.V.col(2);
          c.x2 = Ru * G.fam[1].eig.V.col(2);
        }
        cands.push_back(c);
      }
    }
  }
  auto far_side = [&](const Chord& D, const BoundaryPoint& z) {
    if (same_point(D.first, z, 1e-12) || same_point(D.second, z, 1e-12)) return true;
    return separates(D, o, klein_boundary(z));
  };
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const Vec3 nrm = klein_boundary(cands[i].chord.first).cross(klein_boundary(cands[i].chord.second));
    if (std::abs(nrm.dot(o)) < 1e-9 * nrm.norm()) throw Error(ErrorCode::BadInput, "basepoint lies on a leaf");
    bool visible = true;
    for (std::size_t j = 0; j < cands.size() && visible; ++j) {
      if (i == j) continue;
      const Chord& D = cands[j].chord;
      if (same_point(D.first, cands[i].chord.first, 1e-12) && same_point(D.second, cands[i].chord.second, 1e-12))
        continue;
      if (far_side(D, cands[i].chord.first) && far_side(D, cands[i].chord.second)) visible = false;
    }
    if (visible) {
      pts.push_back(cone_lift(G.chart, cands[i].x1.normalized()));
      pts.push_back(cone_lift(G.chart, cands[i].x2.normalized()));
    }
  }
  if (pts.size() < 3) throw Error(ErrorCode::InsufficientData, "base region has too few visible leaves");
  G.P0 = Vec3::Zero();
  for (const Vec3& p : pts) G.P0 += p;
  G.P0.normalize();
  return G;
}

struct Explicit {
  Chord chord;
  Covec3 cov;
};

// Sum for one radius; returns total and the terms.
GeneratorSum sum_at_radius(Geometry& G, const Word& gamma, int R) {
  const BendingInput& in = G.in;
  const Vec3 o = origin();
  const Vec3 Q = sym2_matrix(in.rho.fuchsian(gamma)) * o;
  const double zone_eps = 1e-6;

  struct Zone {
    BoundaryPoint fixed, attract, cutoff;
  };
  std::vector<Zone> zones;
  GeneratorSum out;
  std::vector<Explicit> leaves;
  std::map<long long, std::vector<std::size_t>> index;
  auto add_leaf = [&](const Chord& c, const Covec3& cov) {
    long long key = std::llround(c.first.angle * 1e6);
    for (long long k = key - 1; k <= key + 1; ++k) {
      auto it = index.find(k);
      if (it == index.end()) continue;
      for (std::size_t i : it->second)
        if (same_point(leaves[i].chord.first, c.first, 1e-9) && same_point(leaves[i].chord.second, c.second, 1e-9))
          return;
    }
    index[key].push_back(leaves.size());
    leaves.push_back({c, cov});
  };

  std::vector<Chord> seen_axes;
  for (const auto& [u, U] : G.ball(R)) {
    for (int f = 0; f < 2; ++f) {
      const Family& fa = G.fam[f];
      for (int n = -in.walk; n <= in.walk; ++n) {
        Chord c = G.chord(U, f, n);
        if (angular_distance(c.first, c.second) < 1e-12) continue;
        if (separates(c, o, Q)) add_leaf(c, G.signed_cov(G.covector(u, f, n)));
      }
      Chord ax = move(U, fa.axis);
      if (!separates(ax, o, Q)) continue;
      bool dup = false;
      for (const Chord& s : seen_axes)
        if (same_point(s.first, ax.first, 1e-9) && same_point(s.second, ax.second, 1e-9)) dup = true;
      if (dup) continue;
      seen_axes.push_back(ax);
      // Both families accumulate on a lift of c1 (family 1) or c2 (family 2); for c1 = c2
      // both do, handled by the loop over f with the same u.
      for (int h = 0; h < 2; ++h) {
        if (!(G.fam[h].c == fa.c)) continue;
        int N = 1;
        for (;; ++N) {
          if (N > 200) throw Error(ErrorCode::EnumerationOverflow, "tail did not settle onto its axis");
          Chord c = G.chord(U, h, N);
          BoundaryPoint moving = h == 0 ? c.second : c.first;
          if (separates(c, o, Q)) add_leaf(c, G.signed_cov(G.covector(u, h, N)));
          if (angular_distance(moving, ax.first) < zone_eps && separates(c, o, Q)) break;
        }
        // Explicit leaves n < N stay; the closed form covers n >= N.
        for (int n = 0; n < N; ++n) {
          Chord c = G.chord(U, h, n);
          if (separates(c, o, Q)) add_leaf(c, G.signed_cov(G.covector(u, h, n)));
        }
        Chord cN = G.chord(U, h, N), cprev = G.chord(U, h, N - 1);
        zones.push_back({ax.second, ax.first, h == 0 ? cprev.second : cprev.first});
        Covec3 probe = G.covector(u, h, N);
        double sign = G.signed_cov(probe).dot(probe) > 0 ? 1.0 : -1.0;
        const Family& fh = G.fam[h];
        Covec3 base = fh.beta * fh.eig.V.inverse();  // rho(c)^0-level covector of the family
        Covec3 tail = sign * tail_closed_form(fh.eig, base, N) * in.rho(inverse(u));
        LeafTerm t;
        t.chord = cN;
        t.covector = tail;
        t.family = h + 1;
        t.tail = true;
        t.first_n = N;
        t.weight = tail.norm();
        out.terms.push_back(t);
        out.b += tail;
        out.tail_bound += tail.norm();
      }
    }
  }
  for (const Explicit& e : leaves) {
    bool in_zone = false;
    for (const Zone& z : zones) {
      for (int side = 0; side < 2 && !in_zone; ++side) {
        const BoundaryPoint& fixed = side == 0 ? e.chord.first : e.chord.second;
        const BoundaryPoint& other = side == 0 ? e.chord.second : e.chord.first;
        if (!same_point(fixed, z.fixed, 1e-9)) continue;
        if (same_point(other, z.attract, 1e-12) || in_arc_avoiding(other, z.cutoff, z.attract, z.fixed))
          in_zone = true;
      }
      if (in_zone) break;
    }
    if (in_zone) continue;
    LeafTerm t;
    t.chord = e.chord;
    t.covector = e.cov;
    t.weight = e.cov.norm();
    out.terms.push_back(t);
    out.b += e.cov;
  }
  return out;
}

GeneratorSum stable_sum(Geometry& G, const Word& gamma, int* radius) {
  const BendingInput& in = G.in;
  GeneratorSum prev = sum_at_radius(G, gamma, in.min_radius);
  for (int R = in.min_radius + 1; R <= in.max_radius; ++R) {
    GeneratorSum cur = sum_at_radius(G, gamma, R);
    double scale = std::max(1.0, cur.b.norm());
    if ((cur.b - prev.b).norm() <= 1e-12 * scale && cur.terms.size() == prev.terms.size()) {
      if (radius) *radius = std::max(*radius, R);
      return cur;
    }
    prev = cur;
  }
  throw Error(ErrorCode::EnumerationOverflow, "separating lifts did not stabilize by radius " +
                                                  std::to_string(in.max_radius) + " for " + to_string(gamma));
}

}  // namespace

GeneratorSum separating_sum(const BendingInput& in, const Word& g) {
  Geometry G = make_geometry(in);
  int r = 0;
  return stable_sum(G, g, &r);
}

BendingResult bend_representation(const BendingInput& in) {
  for (const Word& c : {in.spiral.c1, in.spiral.c2}) {
    MiddleEigen e = middle_eigen_data(in.rho, c);
    if (e.l2 <= 1.0 + tol().rank_eps)
      throw Error(ErrorCode::Divergent, "Lambda_2(" + to_string(c) + ") = " + std::to_string(e.l2) +
                                            " <= 1: tails would diverge");
  }
  Geometry G = make_geometry(in);
  BendingResult r;
  r.base_point = G.P0;
  r.leaf_covector = G.alpha_m;
  const HitchinRep& rho = in.rho;
  const int n = 2 * rho.genus;
  Cocycle phi;
  for (int g = 0; g < n; ++g) {
    GeneratorSum s = stable_sum(G, Word(std::vector<int>{g + 1}), &r.radius_used);
    phi.values.push_back(in.t * s.b);
    r.sums.push_back(std::move(s));
  }
  r.eta = assemble(rho, phi);
  r.phi = phi;
  r.relator_residual = relator_residual(r.eta);
  return r;
}

Mat4 scaling_conjugator(double s, double a, double b) {
  if (s <= 0) throw Error(ErrorCode::BadInput, "scale must be positive");
  Vec4 d(std::pow(s, a), std::pow(s, a), std::pow(s, a), std::pow(s, b));
  return d.asDiagonal();
}

CoaffineRep conjugate(const CoaffineRep& eta, const Mat4& D) {
  CoaffineRep out = eta;
  Mat4 Di = D.inverse();
  for (std::size_t g = 0; g < eta.images.size(); ++g) {
    out.images[g] = D * eta.images[g] * Di;
    out.inverses[g] = D * eta.inverses[g] * Di;
  }
  for (std::size_t g = 0; g < eta.images.size(); ++g) {
    out.linear_part.images[g] = out.images[g].topLeftCorner<3, 3>();
    out.linear_part.inverses[g] = out.inverses[g].topLeftCorner<3, 3>();
  }
  out.cocycle = extract_cocycle(out);
  return out;
}

AnosovReport anosov_certificate(const CoaffineRep& eta, int L) {
  AnosovReport r;
  r.e4_margin = 1.0;
  const int genus = eta.linear_part.genus;
  Vec4 e4 = Vec4::UnitW();
  for (int n = 1; n <= L; ++n) {
    double worst = INFINITY;
    for (const Word& w : reduced_words(genus, n)) {
      if (!dehn_reduced(w, genus)) continue;
      Mat4 M = eta(w);
      Eigen::JacobiSVD<Mat4> svd(M);
      Vec4 sv = svd.singularValues();
      worst = std::min(worst, std::log(sv(0) / sv(1)));
      if (!is_cyclically_reduced(w)) continue;
      Eigen::EigenSolver<Mat4> es(M);
      int best = 0;
      for (int i = 1; i < 4; ++i)
        if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
      Eigen::VectorXd x = es.eigenvectors().col(best).real();
      r.e4_margin = std::min(r.e4_margin, proj_dist(x, e4));
    }
    r.min_log_gap.push_back(worst);
  }
  // Trend, not strict monotonicity: single lengths may dip by a bounded amount.
  const int m = static_cast<int>(r.min_log_gap.size());
  if (m >= 2) {
    double mx = (m + 1) / 2.0, sxy = 0, sxx = 0, my = 0;
    for (double g : r.min_log_gap) my += g / m;
    for (int i = 0; i < m; ++i) {
      sxy += (i + 1 - mx) * (r.min_log_gap[i] - my);
      sxx += (i + 1 - mx) * (i + 1 - mx);
    }
    r.slope = sxy / sxx;
    if (r.slope <= 0 || r.min_log_gap.back() <= r.min_log_gap.front()) {
      r.pass = false;
      r.note = "singular-value gap does not grow with word length";
    }
  }
  if (r.e4_margin < tol().rank_eps) {
    r.pass = false;
    r.note = "a limit point approaches [e4]";
  }
  return r;
}

}  // namespace cclab
