#include "cclab/hull.hpp"

#include "cclab/slithering.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace cclab {

namespace {

std::atomic<long long> g_exact_calls{0};

int exact_orient(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                 const Eigen::Vector3d& d) {
  using Q = boost::multiprecision::cpp_rational;
  Q m[3][3];
  for (int i = 0; i < 3; ++i) {
    m[0][i] = Q(b(i)) - Q(a(i));
    m[1][i] = Q(c(i)) - Q(a(i));
    m[2][i] = Q(d(i)) - Q(a(i));
  }
  Q det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
          m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

}  // namespace

int orient3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
             const Eigen::Vector3d& d) {
  // Shewchuk's static bound for the expansion about a.
  const double bx = b(0) - a(0), by = b(1) - a(1), bz = b(2) - a(2);
  const double cx = c(0) - a(0), cy = c(1) - a(1), cz = c(2) - a(2);
  const double dx = d(0) - a(0), dy = d(1) - a(1), dz = d(2) - a(2);
  const double m1 = cy * dz, m2 = cz * dy, m3 = cz * dx, m4 = cx * dz, m5 = cx * dy, m6 = cy * dx;
  const double det = bx * (m1 - m2) + by * (m3 - m4) + bz * (m5 - m6);
  const double perm = (std::abs(m1) + std::abs(m2)) * std::abs(bx) + (std::abs(m3) + std::abs(m4)) * std::abs(by) +
                      (std::abs(m5) + std::abs(m6)) * std::abs(bz);
  const double bound = 7.771561172376103e-16 * perm;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  ++g_exact_calls;
  return exact_orient(a, b, c, d);
}

long long exact_orient_calls() { return g_exact_calls.load(); }

namespace {

struct QFace {
  std::array<int, 3> v{};
  std::array<int, 3> nb{-1, -1, -1};
  bool alive = true;
  std::vector<int> outside;
  int far = -1;
  double far_dist = -1;
  int seen = -1, vis = -1;  // stamps of the last visibility search
  Eigen::Vector3d n;  // float normal, for furthest-point choice only
};

class Quickhull {
 public:
  explicit Quickhull(const std::vector<Eigen::Vector3d>& p) : P(p) {}

  Polytope run() {
    Polytope out;
    std::array<int, 4> s;
    if (!initial_simplex(s)) {
      out.flat = true;
      return out;
    }
    const int order[4][3] = {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {2, 3, 0}};
    for (auto& o : order) {
      QFace f;
      f.v = {s[o[0]], s[o[1]], s[o[2]]};
      int opp = s[6 - o[0] - o[1] - o[2]];
      if (orient3d(P[f.v[0]], P[f.v[1]], P[f.v[2]], P[opp]) > 0) std::swap(f.v[1], f.v[2]);
      add_face(f);
    }
    link_all();
    std::vector<int> pts;
    for (int i = 0; i < static_cast<int>(P.size()); ++i)
      if (i != s[0] && i != s[1] && i != s[2] && i != s[3]) pts.push_back(i);
    std::vector<int> fresh = {0, 1, 2, 3};
    assign(pts, fresh);
    for (std::size_t k = 0; k < F.size(); ++k) {
      if (F[k].alive && !F[k].outside.empty()) add_point(static_cast<int>(k));
    }
    std::vector<int> idx(F.size(), -1);
    for (std::size_t k = 0; k < F.size(); ++k)
      if (F[k].alive) {
        idx[k] = static_cast<int>(out.facets.size());
        Facet f;
        f.v = F[k].v;
        out.facets.push_back(f);
      }
    std::vector<char> isv(P.size(), 0);
    for (std::size_t k = 0; k < F.size(); ++k)
      if (F[k].alive) {
        for (int i = 0; i < 3; ++i) {
          out.facets[idx[k]].nb[i] = idx[F[k].nb[i]];
          isv[F[k].v[i]] = 1;
        }
      }
    for (std::size_t i = 0; i < P.size(); ++i)
      if (isv[i]) out.vertices.push_back(static_cast<int>(i));
    return out;
  }

 private:
  const std::vector<Eigen::Vector3d>& P;
  std::vector<QFace> F;
  int stamp = 0;

  bool initial_simplex(std::array<int, 4>& s) {
    const int n = static_cast<int>(P.size());
    if (n < 4) return false;
    int lo = 0, hi = 0;
    for (int i = 1; i < n; ++i) {
      if (P[i](0) < P[lo](0)) lo = i;
      if (P[i](0) > P[hi](0)) hi = i;
    }
    if (lo == hi) {
      double best = -1;
      for (int i = 0; i < n; ++i) {
        double d = (P[i] - P[lo]).norm();
        if (d > best) best = d, hi = i;
      }
      if (best <= 0) return false;
    }
    Eigen::Vector3d dir = (P[hi] - P[lo]).normalized();
    int third = -1;
    double best = 0;
    for (int i = 0; i < n; ++i) {
      double d = (P[i] - P[lo]).cross(dir).norm();
      if (d > best) best = d, third = i;
    }
    if (third < 0) return false;
    Eigen::Vector3d nrm = (P[hi] - P[lo]).cross(P[third] - P[lo]);
    int fourth = -1;
    best = 0;
    for (int i = 0; i < n; ++i) {
      double d = std::abs(nrm.dot(P[i] - P[lo]));
      if (d > best) best = d, fourth = i;
    }
    if (fourth < 0 || orient3d(P[lo], P[hi], P[third], P[fourth]) == 0) {
      fourth = -1;
      for (int i = 0; i < n && fourth < 0; ++i)
        if (orient3d(P[lo], P[hi], P[third], P[i]) != 0) fourth = i;
      if (fourth < 0) return false;
    }
    s = {lo, hi, third, fourth};
    return true;
  }

  int add_face(QFace f) {
    f.n = (P[f.v[1]] - P[f.v[0]]).cross(P[f.v[2]] - P[f.v[0]]);
    double nn = f.n.norm();
    if (nn > 0) f.n /= nn;
    F.push_back(std::move(f));
    return static_cast<int>(F.size()) - 1;
  }

  void link_all() {
    std::map<std::pair<int, int>, std::pair<int, int>> edge;
    for (std::size_t k = 0; k < F.size(); ++k)
      for (int i = 0; i < 3; ++i) edge[{F[k].v[i], F[k].v[(i + 1) % 3]}] = {static_cast<int>(k), i};
    for (std::size_t k = 0; k < F.size(); ++k)
      for (int i = 0; i < 3; ++i) F[k].nb[i] = edge.at({F[k].v[(i + 1) % 3], F[k].v[i]}).first;
  }

  bool visible(int f, int p) const { return orient3d(P[F[f].v[0]], P[F[f].v[1]], P[F[f].v[2]], P[p]) > 0; }

  void assign(const std::vector<int>& pts, const std::vector<int>& faces) {
    for (int p : pts)
      for (int f : faces)
        if (visible(f, p)) {
          QFace& q = F[f];
          q.outside.push_back(p);
          double d = q.n.dot(P[p] - P[q.v[0]]);
          if (d > q.far_dist) q.far_dist = d, q.far = p;
          break;
        }
  }

  // Grows the hull by the furthest outside point of face k, then recurses on faces with
  // remaining outside sets via an explicit stack.
  void add_point(int start) {
    std::vector<int> stack = {start};
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      if (!F[k].alive || F[k].outside.empty()) continue;
      const int p = F[k].far;
      ++stamp;
      std::vector<int> vis = {k};
      F[k].seen = F[k].vis = stamp;
      for (std::size_t i = 0; i < vis.size(); ++i)
        for (int e = 0; e < 3; ++e) {
          int g = F[vis[i]].nb[e];
          if (F[g].seen != stamp) {
            F[g].seen = stamp;
            if (visible(g, p)) {
              F[g].vis = stamp;
              vis.push_back(g);
            }
          }
        }
      std::vector<int> orphans;
      std::map<int, int> by_start, by_end;
      std::vector<int> created;
      for (int f : vis) {
        for (int e = 0; e < 3; ++e) {
          int g = F[f].nb[e];
          if (F[g].vis == stamp) continue;
          int a = F[f].v[e], b = F[f].v[(e + 1) % 3];
          QFace nf;
          nf.v = {a, b, p};
          nf.nb[0] = g;
          int id = add_face(nf);
          for (int j = 0; j < 3; ++j)
            if (F[g].nb[j] == f) F[g].nb[j] = id;
          by_start[a] = id;
          by_end[b] = id;
          created.push_back(id);
        }
        for (int q : F[f].outside)
          if (q != p) orphans.push_back(q);
        F[f].alive = false;
        F[f].outside.clear();
      }
      for (int id : created) {
        F[id].nb[1] = by_start.at(F[id].v[1]);
        F[id].nb[2] = by_end.at(F[id].v[0]);
      }
      assign(orphans, created);
      for (int id : created)
        if (!F[id].outside.empty()) stack.push_back(id);
    }
  }
};

Covec3 plane_alpha(const Vec4& a, const Vec4& b, const Vec4& c, double* cond) {
  Mat3 X;
  X.row(0) = a.head<3>().transpose();
  X.row(1) = b.head<3>().transpose();
  X.row(2) = c.head<3>().transpose();
  Vec3 z(-a(3), -b(3), -c(3));
  Eigen::JacobiSVD<Mat3> svd(X);
  *cond = svd.singularValues()(0) / svd.singularValues()(2);
  return Vec3(X.fullPivLu().solve(z)).transpose();
}

}  // namespace

Polytope convex_hull(const std::vector<Eigen::Vector3d>& pts) { return Quickhull(pts).run(); }

Eigen::Vector2d HullChart::project(const Vec3& x) const {
  double k = kappa.dot(x.transpose());
  if (std::abs(k) < tol().rank_eps * x.norm()) throw Error(ErrorCode::ChartDegenerate, "point on the chart line");
  return uv * (x / k);
}

HullComplex build_hull(const CoaffineRep& eta, const HullOptions& opt) {
  if (opt.L < 1) throw Error(ErrorCode::BadInput, "sampling depth must be positive");
  const HitchinRep& rho = eta.linear_part;
  const FuchsianRep& fu = rho.fuchsian;
  HullComplex H;
  H.depth = opt.L;
  H.chart.kappa = cone_chart(rho, 4).kappa;
  Eigen::JacobiSVD<MatX> svd(MatX(H.chart.kappa), Eigen::ComputeFullV);
  H.chart.uv.row(0) = svd.matrixV().col(1).transpose();
  H.chart.uv.row(1) = svd.matrixV().col(2).transpose();

  // Breadth-first over reduced words, carrying eta and Fuchsian products. A child whose
  // attracting point moved less than delta from its parent's adds no resolution at this
  // depth, and neither would its descendants, so the branch is pruned.
  struct Node {
    Word w;
    Mat4 E;
    Mat2 A;
    double angle = 0;
  };
  const int ng = 2 * rho.genus;
  const double delta = 2 * M_PI * std::pow(opt.resolution_base, -opt.L);
  std::vector<Node> level = {{Word(), Mat4::Identity(), Mat2::Identity(), 0.0}};
  std::vector<HullSample> raw;
  H.chart.margin = INFINITY;
  for (int len = 1; len <= opt.L && !level.empty() && raw.size() < opt.N_cap; ++len) {
    std::vector<Node> next;
    for (const Node& nd : level)
      for (int g = 1; g <= ng; ++g)
        for (int sgn : {1, -1}) {
          int l = sgn * g;
          if (!nd.w.empty() && nd.w.letters.back() == -l) continue;
          Node c;
          c.w = nd.w;
          c.w.letters.push_back(l);
          c.A = nd.A * (l > 0 ? fu.images[g - 1] : fu.inverses[g - 1]);
          if (std::abs(c.A.trace()) < 2.0 + 1e-9) continue;  // a relator: the identity element
          c.angle = axis_endpoints(c.A).first.angle;
          if (!nd.w.empty() && angular_distance(BoundaryPoint{c.angle}, BoundaryPoint{nd.angle}) < delta) continue;
          c.E = nd.E * (l > 0 ? eta.images[g - 1] : eta.inverses[g - 1]);
          next.push_back(c);
        }
    for (const Node& c : next) {
      if (raw.size() >= opt.N_cap) break;
      Mat3 R = c.E.topLeftCorner<3, 3>();
      Eigen::EigenSolver<Mat3> es(R);
      int top = 0;
      for (int i = 1; i < 3; ++i)
        if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(top))) top = i;
      double lam = es.eigenvalues()(top).real();
      if (std::abs(es.eigenvalues()(top).imag()) > 1e-9 * std::abs(lam) || std::abs(lam) <= 1.0 + 1e-12)
        throw Error(ErrorCode::NonRealSpectrum, "no attracting eigenvalue for " + to_string(c.w));
      Vec3 v = es.eigenvectors().col(top).real();
      double k = H.chart.kappa.dot(v.transpose());
      H.chart.margin = std::min(H.chart.margin, std::abs(k) / v.norm());
      if (std::abs(k) < opt.chart_margin * v.norm())
        throw Error(ErrorCode::ChartDegenerate, "limit point of " + to_string(c.w) + " is near the chart line");
      v /= k;
      double z = c.E.block<1, 3>(3, 0).dot(v.transpose()) / (lam - 1.0);
      HullSample s;
      s.lift << v, z;
      s.word = c.w;
      s.angle = c.angle;
      raw.push_back(s);
    }
    level = std::move(next);
  }
  // Focus refinement: eta(w)^k carries the sample to the limit curve near the attracting
  // point of w, resolving the regions that w^k moves there.
  const std::size_t base = raw.size();
  for (const Word& w : opt.focus) {
    Mat4 E = Mat4::Identity();
    Mat2 A = Mat2::Identity();
    Word wk;
    for (int k = 1; k <= opt.focus_power; ++k) {
      E = E * eta(w);
      A = A * fu(w);
      wk = concat(wk, w);
      for (std::size_t i = 0; i < base; ++i) {
        Vec4 x = E * raw[i].lift;
        double kx = H.chart.kappa.dot(x.head<3>().transpose());
        H.chart.margin = std::min(H.chart.margin, std::abs(kx) / x.head<3>().norm());
        if (std::abs(kx) < opt.chart_margin * x.head<3>().norm())
          throw Error(ErrorCode::ChartDegenerate, "focused sample near the chart line");
        HullSample s;
        s.lift = x / kx;
        s.word = concat(concat(wk, raw[i].word), inverse(wk));
        s.angle = mobius(A, BoundaryPoint{raw[i].angle}).angle;
        raw.push_back(s);
      }
    }
  }
  std::sort(raw.begin(), raw.end(), [](const HullSample& a, const HullSample& b) { return a.angle < b.angle; });
  for (const HullSample& s : raw) {
    if (!H.samples.empty() && s.angle - H.samples.back().angle < opt.dedupe) continue;
    H.samples.push_back(s);
  }
  while (H.samples.size() > 1 && H.samples.back().angle - H.samples.front().angle > 2 * M_PI - opt.dedupe)
    H.samples.pop_back();
  if (H.samples.size() < 4) throw Error(ErrorCode::HullDegenerate, "fewer than four distinct limit samples");

  std::vector<Eigen::Vector3d> pts;
  Eigen::Vector2d lo(INFINITY, INFINITY), hi(-INFINITY, -INFINITY);
  for (HullSample& s : H.samples) {
    Eigen::Vector2d q = H.chart.uv * s.lift.head<3>();
    s.chart << q, s.lift(3);
    pts.push_back(s.chart);
    lo = lo.cwiseMin(q);
    hi = hi.cwiseMax(q);
  }
  H.extent = (hi - lo).norm();
  for (const auto& p : pts) H.height_scale = std::max(H.height_scale, std::abs(p(2)));

  // Best plane h = a u + b v + c; flat when every sample is within 1e-9 (relative) of it.
  MatX A(pts.size(), 3);
  VecX hgt(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    A.row(i) << pts[i](0), pts[i](1), 1.0;
    hgt(i) = pts[i](2);
  }
  Vec3 abc = A.colPivHouseholderQr().solve(hgt);
  H.flat_residual = (A * abc - hgt).cwiseAbs().maxCoeff();
  if (H.flat_residual < 1e-9 * (1.0 + H.height_scale)) {
    H.flat = true;
    H.hull.flat = true;
    H.flat_alpha = -(abc(0) * H.chart.uv.row(0) + abc(1) * H.chart.uv.row(1) + abc(2) * H.chart.kappa);
    return H;
  }
  H.hull = convex_hull(pts);
  if (H.hull.flat) throw Error(ErrorCode::HullDegenerate, "samples are affinely dependent");
  for (Facet& f : H.hull.facets) {
    const Eigen::Vector3d &a = pts[f.v[0]], &b = pts[f.v[1]], &c = pts[f.v[2]];
    double up = (b - a)(0) * (c - a)(1) - (b - a)(1) * (c - a)(0);
    f.upper = up > 0;
    (f.upper ? H.upper_count : H.lower_count)++;
    f.alpha = plane_alpha(H.samples[f.v[0]].lift, H.samples[f.v[1]].lift, H.samples[f.v[2]].lift, &f.cond);
  }
  return H;
}

namespace {

// Facet of the chosen disk whose projection contains q: the one maximizing the smallest
// barycentric coordinate.
int locate(const HullComplex& H, const Eigen::Vector2d& q, bool upper, double* score) {
  int best = -1;
  double bs = -INFINITY;
  for (std::size_t k = 0; k < H.hull.facets.size(); ++k) {
    const Facet& f = H.hull.facets[k];
    if (f.upper != upper) continue;
    Eigen::Vector2d a = H.samples[f.v[0]].chart.head<2>(), b = H.samples[f.v[1]].chart.head<2>(),
                    c = H.samples[f.v[2]].chart.head<2>();
    double d = (b - a)(0) * (c - a)(1) - (b - a)(1) * (c - a)(0);
    if (d == 0.0) continue;
    auto cr = [](const Eigen::Vector2d& x, const Eigen::Vector2d& y, const Eigen::Vector2d& z) {
      return (y - x)(0) * (z - x)(1) - (y - x)(1) * (z - x)(0);
    };
    double l0 = cr(q, b, c) / d, l1 = cr(a, q, c) / d, l2 = cr(a, b, q) / d;
    double s = std::min({l0, l1, l2});
    if (s > bs) bs = s, best = static_cast<int>(k);
  }
  if (score) *score = bs;
  return best;
}

// Facets of one flat piece carry the same plane up to rounding amplified by their conditioning; the plane is
// refitted by least squares over the vertices of the connected cluster around facet k.
Covec3 cluster_plane(const HullComplex& H, int k, int* size, double tol_rel = 1e-12, std::size_t cap = 4000) {
  const auto& F = H.hull.facets;
  const Covec3 a0 = F[k].alpha;
  std::vector<int> cl = {k};
  std::set<int> in = {k};
  for (std::size_t i = 0; i < cl.size() && cl.size() < cap; ++i)
    for (int e = 0; e < 3; ++e) {
      int g = F[cl[i]].nb[e];
      if (in.count(g) || F[g].upper != F[k].upper) continue;
      if ((F[g].alpha - a0).norm() > tol_rel * (F[g].cond + F[k].cond) * (1.0 + a0.norm() + H.height_scale)) continue;
      in.insert(g);
      cl.push_back(g);
    }
  *size = static_cast<int>(cl.size());
  std::set<int> vs;
  for (int f : cl)
    for (int v : F[f].v) vs.insert(v);
  MatX X(vs.size(), 3);
  VecX z(vs.size());
  int i = 0;
  for (int v : vs) {
    X.row(i) = H.samples[v].lift.head<3>().transpose();
    z(i++) = -H.samples[v].lift(3);
  }
  return Vec3(X.colPivHouseholderQr().solve(z)).transpose();
}

FacetLookup lookup_chart(const HullComplex& H, const Eigen::Vector2d& q, bool upper) {
  FacetLookup r;
  if (H.flat) {
    r.alpha = H.flat_alpha;
    return r;
  }
  double score = 0;
  r.facet = locate(H, q, upper, &score);
  if (r.facet < 0 || score < -1e-9)
    throw Error(ErrorCode::FacetLookupFailed, "point lies outside the projected hull");
  r.alpha = cluster_plane(H, r.facet, &r.cluster_size);
  return r;
}

}  // namespace

FacetLookup facet_over_point(const HullComplex& H, const Vec3& x, bool upper) {
  return lookup_chart(H, H.chart.project(x), upper);
}

FacetLookup facet_over(const HullComplex& H, const Vec3& x, bool upper, double radius, double agree) {
  Eigen::Vector2d q = H.chart.project(x);
  FacetLookup r = lookup_chart(H, q, upper);
  const double rr = radius * H.extent;
  for (int k = 0; k < 6; ++k) {
    Eigen::Vector2d d(std::cos(k * M_PI / 3), std::sin(k * M_PI / 3));
    FacetLookup o = lookup_chart(H, q + rr * d, upper);
    r.spread = std::max(r.spread, (o.alpha - r.alpha).norm());
  }
  if (r.spread > agree * std::max(1.0, r.alpha.norm()))
    throw Error(ErrorCode::FacetLookupFailed, "support planes disagree near the lookup point (spread " +
                                                  std::to_string(r.spread) + ")");
  return r;
}

ConvexityReport convexity_check(const HullComplex& H, std::mt19937_64& rng, long long pair_budget, double eps) {
  ConvexityReport rep;
  if (H.flat) {
    rep.max_abs_difference_zero = true;
    return rep;
  }
  std::vector<int> up;
  for (std::size_t k = 0; k < H.hull.facets.size(); ++k)
    if (H.hull.facets[k].upper) up.push_back(static_cast<int>(k));
  const auto& verts = H.hull.vertices;
  auto value = [&](const Covec3& a, int s) { return a.dot(H.samples[s].lift.head<3>().transpose()) + H.samples[s].lift(3); };
  // Support: every upper plane passes above every vertex (value <= 0 is below in height).
  const long long nv = static_cast<long long>(verts.size());
  const bool all = static_cast<long long>(up.size()) * nv <= pair_budget;
  std::uniform_int_distribution<long long> V(0, std::max<long long>(nv - 1, 0));
  const long long per = all ? nv : std::max<long long>(8, pair_budget / std::max<long long>(1, up.size()));
  for (int k : up) {
    const Facet& f = H.hull.facets[k];
    const double scale = eps * (1.0 + f.alpha.norm()) * f.cond;
    auto test = [&](int s) {
      double v = value(f.alpha, s);
      if (v > scale) {
        rep.support_ok = false;
        rep.support_violation = std::max(rep.support_violation, v / scale * eps);
      }
    };
    if (all) {
      for (int s : verts) test(s);
    } else {
      for (int e = 0; e < 3; ++e)
        for (int s : H.hull.facets[f.nb[e]].v) test(s);
      for (long long r = 0; r < per; ++r) test(verts[V(rng)]);
    }
  }
  // Differences: alpha(P2) - alpha(P1) is >= 0 on the vertices of P2 and <= 0 on those of P1.
  auto pair = [&](int i, int j) {
    const Facet &P1 = H.hull.facets[i], &P2 = H.hull.facets[j];
    Covec3 d = P2.alpha - P1.alpha;
    rep.max_abs_difference = std::max(rep.max_abs_difference, d.norm());
    const double scale = eps * (1.0 + P1.alpha.norm() * P1.cond + P2.alpha.norm() * P2.cond);
    for (int s : P2.v) {
      double v = -d.dot(H.samples[s].lift.head<3>().transpose());
      if (v > scale) rep.difference_violation = std::max(rep.difference_violation, v), rep.differences_ok = false;
    }
    for (int s : P1.v) {
      double v = d.dot(H.samples[s].lift.head<3>().transpose());
      if (v > scale) rep.difference_violation = std::max(rep.difference_violation, v), rep.differences_ok = false;
    }
    ++rep.pairs_checked;
  };
  const long long n = static_cast<long long>(up.size());
  if (n * (n - 1) / 2 <= pair_budget) {
    for (long long i = 0; i < n; ++i)
      for (long long j = i + 1; j < n; ++j) pair(up[i], up[j]);
  } else {
    for (int k : up)
      for (int e = 0; e < 3; ++e)
        if (H.hull.facets[H.hull.facets[k].nb[e]].upper) pair(k, H.hull.facets[k].nb[e]);
    std::uniform_int_distribution<long long> U(0, n - 1);
    while (rep.pairs_checked < pair_budget) {
      long long i = U(rng), j = U(rng);
      if (i != j) pair(up[i], up[j]);
    }
  }
  return rep;
}

BendingCocycleSample bending_cocycle_from_hull(const HullComplex& H, const HitchinRep& rho, const Vec3& p,
                                               bool upper) {
  BendingCocycleSample out;
  FacetLookup base = facet_over(H, p, upper);
  out.base_facet = base.facet;
  out.base_alpha = base.alpha;
  out.lookup_spread = base.spread;
  const int ng = 2 * rho.genus;
  for (int g = 0; g < ng; ++g) {
    FacetLookup f = facet_over(H, rho.images[g] * p, upper);
    out.lookup_spread = std::max(out.lookup_spread, f.spread);
    out.psi.values.push_back(f.alpha - base.alpha);
  }
  return out;
}

CohomologousReport compare_cocycles(const HitchinRep& rho, const Cocycle& psi, const Cocycle& phi) {
  CohomologousReport r;
  Witness w = reducibility_witness(rho, psi - phi);
  const double n = std::max(phi.norm(), std::numeric_limits<double>::min());
  r.residual = w.residual;
  r.relative = w.residual / n;
  r.direct = (psi - phi).norm() / n;
  return r;
}

LocalizationReport localization(const HullComplex& H, const BendingInput& in, int ball_radius, double offset) {
  LocalizationReport rep;
  for (const Word& g : group_ball(in.rho.fuchsian, ball_radius)) {
    LeafFlags L = spiral_leaf_flags(in.rho, in.spiral, g);
    Eigen::Vector2d a = H.chart.project(L.minus.point), b = H.chart.project(L.plus.point);
    double len = (b - a).norm();
    if (len < 0.05 * H.extent) continue;  // too close to the boundary for this depth
    Eigen::Vector2d mid = 0.5 * (a + b), nrm((b - a)(1), -(b - a)(0));
    nrm /= len;
    Covec3 d;
    try {
      d = lookup_chart(H, mid + offset * H.extent * nrm, true).alpha -
          lookup_chart(H, mid - offset * H.extent * nrm, true).alpha;
    } catch (const Error&) {
      continue;
    }
    if (d.norm() == 0.0) {
      rep.distances.push_back(1.0);
      continue;
    }
    rep.distances.push_back(proj_dist(d.transpose(), leaf_covector(L.minus, L.plus).transpose()));
  }
  rep.leaves = static_cast<int>(rep.distances.size());
  if (rep.leaves) {
    std::vector<double> s = rep.distances;
    std::sort(s.begin(), s.end());
    rep.max_distance = s.back();
    rep.median_distance = s[s.size() / 2];
  }
  return rep;
}

namespace {

struct StrandData {
  EigenBasis3 eig;
  Mat3 Vi;
  Covec3 beta;
};

StrandData strand_data(const BendingInput& in, const BendingResult& bent) {
  StrandData d;
  Mat3 C = in.rho(in.spiral.c1), Ci = in.rho(inverse(in.spiral.c1));
  d.eig = eigen_basis(C, Ci);
  d.Vi = d.eig.V.inverse();
  d.beta = bent.leaf_covector * d.eig.V;
  return d;
}

}  // namespace

double strand_weight_scale(const BendingInput& in, const BendingResult& bent) {
  StrandData d = strand_data(in, bent);
  return in.t * std::abs(d.beta(1)) * d.Vi.row(1).norm();
}

MeasureCheck measure_vs_cocycle_check(const HullComplex& H, const BendingInput& in, const BendingResult& bent,
                                      const AtomicEquivariantMeasure& mu, int first, int count, bool reversed) {
  if (count < 1 || first < 1) throw Error(ErrorCode::BadInput, "transversal needs first >= 1 and count >= 1");
  StrandData d = strand_data(in, bent);
  const HitchinRep& rho = in.rho;
  const Word& c = in.spiral.c1;
  const Mat3 C = rho(c), Ci = rho(inverse(c));

  // The strands c^j m all leave the repelling point of c, so in the chart they form a fan of
  // segments from P- whose far ends converge to P+.
  Eigen::Vector2d Pm = H.chart.project(attracting_flag(Ci, C).point);
  Eigen::Vector2d Pp = H.chart.project(attracting_flag(C, Ci).point);
  Eigen::Vector2d M = 0.5 * (Pm + Pp), u = (Pp - Pm).normalized(), n(-u(1), u(0));
  Vec3 mplus = spiral_leaf_flags(rho, in.spiral).plus.point;
  std::vector<double> s;  // crossing offsets along M + s n for j = first-1 .. first+count
  Mat3 Cj = Mat3::Identity();
  for (int j = 0; j < first - 1; ++j) Cj = Cj * C;
  for (int j = first - 1; j <= first + count; ++j) {
    Eigen::Vector2d Q = H.chart.project(Cj * mplus);
    Eigen::Matrix2d A;
    A.col(0) = Q - Pm;
    A.col(1) = -n;
    Eigen::Vector2d ab = A.fullPivLu().solve(M - Pm);
    s.push_back(ab(1));
    Cj = Cj * C;
  }
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(std::abs(s[i]) < std::abs(s[i - 1])) || s[i] * s[0] <= 0)
      throw Error(ErrorCode::InconsistentCombinatorics, "strands do not nest along the transversal");
  Eigen::Vector2d A2 = M + 0.5 * (s[0] + s[1]) * n;
  Eigen::Vector2d B2 = M + 0.5 * (s[count] + s[count + 1]) * n;
  if (reversed) std::swap(A2, B2);
  auto lift = [&](const Eigen::Vector2d& q) {
    Vec3 x = H.chart.kappa.transpose() / H.chart.kappa.squaredNorm() + H.chart.uv.transpose() * q;
    return x;
  };
  const Vec3 xb = lift(B2);

  MeasureCheck out;
  out.strands = count;
  std::vector<Covec3> alphas;
  std::vector<Eigen::Vector2d> pts = {A2};
  for (int k = 1; k < count; ++k) pts.push_back(M + 0.5 * (s[k] + s[k + 1]) * n);
  pts.push_back(B2);
  if (reversed) std::reverse(pts.begin() + 1, pts.end() - 1);
  for (const auto& q : pts) alphas.push_back(lookup_chart(H, q, true).alpha);
  for (int k = 0; k < count; ++k) out.partials.push_back(alphas[k + 1] - alphas[k]);
  out.hull_value = alphas.back() - alphas.front();

  Covec3 middle = d.Vi.row(1) / d.Vi.row(1).norm();
  std::vector<double> w1;
  for (const Atom& a : mu.atoms)
    if (a.side == 1) w1.push_back(a.weight);
  for (int j = first; j < first + count; ++j) {
    Covec3 leaf = d.beta;
    for (int i = 0; i < 3; ++i) leaf(i) *= std::pow(d.eig.values(i), -j);
    leaf = leaf * d.Vi;
    if (leaf.dot(xb.transpose()) < 0) leaf = -leaf;
    if (j >= static_cast<int>(w1.size()))
      throw Error(ErrorCode::BadInput, "measure has no atom for crossing " + std::to_string(j));
    out.atomic_sum += w1[j] * (middle.dot(leaf) < 0 ? -middle : middle);
  }

  // Exact leaf sum: every translate g.m (|g| <= 5) whose chart segment crosses [A, B].
  LeafFlags m = spiral_leaf_flags(rho, in.spiral);
  auto cross = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& p) {
    Eigen::Vector2d u = b - a, v = p - a;
    return u(0) * v(1) - u(1) * v(0);
  };
  std::vector<Eigen::Vector4d> seen;
  for (int len = 0; len <= 5; ++len)
    for (const Word& g : len ? reduced_words(rho.genus, len) : std::vector<Word>{Word{}}) {
      Mat3 G = rho(g);
      Eigen::Vector2d a = H.chart.project(G * m.minus.point), b = H.chart.project(G * m.plus.point);
      if (cross(a, b, A2) * cross(a, b, B2) >= 0 || cross(A2, B2, a) * cross(A2, B2, b) >= 0) continue;
      Eigen::Vector4d key(a(0), a(1), b(0), b(1));
      if (std::any_of(seen.begin(), seen.end(), [&](const Eigen::Vector4d& k) { return (k - key).norm() < 1e-9; }))
        continue;
      seen.push_back(key);
      Covec3 leaf = in.t * bent.leaf_covector * rho(inverse(g));
      if (leaf.dot(xb.transpose()) < 0) leaf = -leaf;  // positive on the far side of the crossing
      out.leaf_sum += leaf;
    }
  out.crossings = static_cast<int>(seen.size());
  out.rel_error_atomic = (out.hull_value - out.atomic_sum).norm() / out.atomic_sum.norm();
  out.rel_error_leaves = (out.hull_value - out.leaf_sum).norm() / out.leaf_sum.norm();
  return out;
}

void write_off(std::ostream& os, const HullComplex& H) {
  std::map<int, int> idx;
  for (int v : H.hull.vertices) idx[v] = static_cast<int>(idx.size());
  os << "OFF\n" << idx.size() << ' ' << H.hull.facets.size() << " 0\n";
  char buf[128];
  for (int v : H.hull.vertices) {
    const auto& c = H.samples[v].chart;
    std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g\n", c(0), c(1), c(2));
    os << buf;
  }
  for (const Facet& f : H.hull.facets) os << "3 " << idx[f.v[0]] << ' ' << idx[f.v[1]] << ' ' << idx[f.v[2]] << '\n';
}

nlohmann::json to_json(const HullComplex& H) {
  nlohmann::json j;
  j["depth"] = H.depth;
  j["samples"] = H.samples.size();
  j["flat"] = H.flat;
  j["flat_residual"] = H.flat_residual;
  j["chart"] = {{"kappa", {H.chart.kappa(0), H.chart.kappa(1), H.chart.kappa(2)}}, {"margin", H.chart.margin}};
  j["upper_facets"] = H.upper_count;
  j["lower_facets"] = H.lower_count;
  nlohmann::json fs = nlohmann::json::array();
  for (const Facet& f : H.hull.facets)
    fs.push_back({{"v", {f.v[0], f.v[1], f.v[2]}}, {"upper", f.upper}, {"alpha", {f.alpha(0), f.alpha(1), f.alpha(2)}}});
  j["facets"] = fs;
  return j;
}

std::string hull_svg(const HullComplex& H) {
  const double S = 500, pad = 10;
  Eigen::Vector2d lo(INFINITY, INFINITY), hi(-INFINITY, -INFINITY);
  for (const HullSample& s : H.samples) {
    lo = lo.cwiseMin(s.chart.head<2>());
    hi = hi.cwiseMax(s.chart.head<2>());
  }
  const double sc = S / std::max((hi - lo).maxCoeff(), 1e-300);
  auto X = [&](const Eigen::Vector3d& c) {
    char b[64];
    std::snprintf(b, sizeof b, "%.2f,%.2f", pad + (c(0) - lo(0)) * sc, pad + S - (c(1) - lo(1)) * sc);
    return std::string(b);
  };
  // Colour by plane: facets with planes equal to 1e-6 share a colour.
  std::map<std::array<long long, 3>, int> cls;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << S + 2 * pad << "\" height=\"" << S + 2 * pad
     << "\">\n";
  for (const Facet& f : H.hull.facets) {
    if (!f.upper) continue;
    std::array<long long, 3> key;
    for (int i = 0; i < 3; ++i) key[i] = std::llround(f.alpha(i) * 1e6);
    int c = cls.emplace(key, static_cast<int>(cls.size())).first->second;
    int hue = (c * 137) % 360;
    os << "<polygon points=\"" << X(H.samples[f.v[0]].chart) << ' ' << X(H.samples[f.v[1]].chart) << ' '
       << X(H.samples[f.v[2]].chart) << "\" fill=\"hsl(" << hue << ",60%,70%)\" stroke=\"#333\" stroke-width=\"0.1\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cclab
