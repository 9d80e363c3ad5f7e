#include "cclab/hull.hpp"

#include "doctest.h"
#include "gen.hpp"

#include <sstream>

using namespace cclab;

namespace {
struct Bent {
  BendingInput in;
  BendingResult b;
  HullComplex H;
};
const Bent& bent(int L = 8, int focus = 0) {
  static std::map<std::pair<int, int>, Bent> cache;
  auto key = std::make_pair(L, focus);
  if (!cache.count(key)) {
    Bent x;
    x.in.rho = default_hitchin();
    x.in.spiral = default_spiral();
    x.b = bend_representation(x.in);
    HullOptions o;
    o.L = L;
    if (focus > 0) {
      o.focus = {x.in.spiral.c1};
      o.focus_power = focus;
    }
    x.H = build_hull(x.b.eta, o);
    cache.emplace(key, std::move(x));
  }
  return cache.at(key);
}
}  // namespace

TEST_CASE("orientation predicate") {
  using V = Eigen::Vector3d;
  CHECK(orient3d(V(0, 0, 0), V(1, 0, 0), V(0, 1, 0), V(0, 0, 1)) != 0);
  CHECK(orient3d(V(0, 0, 0), V(1, 0, 0), V(0, 1, 0), V(0, 0, 1)) ==
        -orient3d(V(0, 0, 0), V(0, 1, 0), V(1, 0, 0), V(0, 0, 1)));
  // points on the plane z = x + y with dyadic coordinates, so the plane holds exactly
  gen::Rng r(101);
  auto on_plane = [&] {
    double x = std::ldexp(std::floor(gen::uniform(r, -1, 1) * 1024), -10) * 1e3;
    double y = std::ldexp(std::floor(gen::uniform(r, -1, 1) * 1024), -10) * 1e3;
    return V(x, y, x + y);
  };
  long long before = exact_orient_calls();
  int nonzero = 0;
  for (int i = 0; i < 200; ++i) {
    V a = on_plane(), b = on_plane(), c = on_plane(), d = on_plane();
    CHECK(orient3d(a, b, c, d) == 0);
    V up = d, down = d;
    up(2) = std::nextafter(d(2), INFINITY);
    down(2) = std::nextafter(d(2), -INFINITY);
    int su = orient3d(a, b, c, up), sd = orient3d(a, b, c, down);
    CHECK(su == -sd);
    nonzero += su != 0;
  }
  CHECK(nonzero > 150);
  CHECK(exact_orient_calls() > before);
  for (int i = 0; i < 200; ++i) {
    V a = V::Random(), b = V::Random(), c = V::Random(), d = V::Random();
    int s = orient3d(a, b, c, d);
    CHECK(orient3d(b, a, c, d) == -s);
    CHECK(orient3d(b, c, a, d) == s);
  }
}

TEST_CASE("convex hull of a cube with interior points") {
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  gen::Rng r(102);
  for (int i = 0; i < 200; ++i) pts.emplace_back(gen::uniform(r, 0.01, 0.99), gen::uniform(r, 0.01, 0.99), gen::uniform(r, 0.01, 0.99));
  Polytope P = convex_hull(pts);
  CHECK(P.vertices.size() == 8);
  CHECK(P.facets.size() == 12);
  CHECK_FALSE(P.flat);
  for (const Facet& f : P.facets)
    for (const auto& p : pts) CHECK(orient3d(pts[f.v[0]], pts[f.v[1]], pts[f.v[2]], p) <= 0);
}

TEST_CASE("random hulls are closed and convex") {
  gen::Rng r(103);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Eigen::Vector3d> pts;
    for (int i = 0; i < 300; ++i) pts.push_back(gen::vec(r));
    Polytope P = convex_hull(pts);
    CHECK(P.facets.size() == 2 * P.vertices.size() - 4);
    for (std::size_t k = 0; k < P.facets.size(); ++k)
      for (int e = 0; e < 3; ++e) {
        const Facet& n = P.facets[P.facets[k].nb[e]];
        CHECK((n.nb[0] == static_cast<int>(k) || n.nb[1] == static_cast<int>(k) || n.nb[2] == static_cast<int>(k)));
      }
    for (const Facet& f : P.facets)
      for (const auto& p : pts) CHECK(orient3d(pts[f.v[0]], pts[f.v[1]], pts[f.v[2]], p) <= 0);
  }
  std::vector<Eigen::Vector3d> plane;
  for (int i = 0; i < 20; ++i) plane.emplace_back(gen::uniform(r, 0, 1), gen::uniform(r, 0, 1), 0.0);
  CHECK(convex_hull(plane).flat);
}

TEST_CASE("reducible representations have flat hulls") {
  HitchinRep rho = default_hitchin();
  CoaffineRep eta0 = assemble(rho, coboundary(rho, Covec3(0.3, -0.2, 0.5)));
  HullOptions o;
  o.L = 6;
  HullComplex H = build_hull(eta0, o);
  CHECK(H.flat);
  CHECK(H.flat_residual < 1e-9);
  std::mt19937_64 rng(1);
  CHECK(convexity_check(H, rng).max_abs_difference_zero);
  BendingCocycleSample bc = bending_cocycle_from_hull(H, rho, cone_chart(rho).interior);
  CHECK(bc.psi.norm() < 1e-9);
}

TEST_CASE("bent hull at the default depth") {
  const Bent& x = bent();
  const HullComplex& H = x.H;
  CHECK_FALSE(H.flat);
  CHECK(H.upper_count > 0);
  CHECK(H.lower_count > 0);
  CHECK(H.chart.margin > 0);
  std::mt19937_64 rng(2);
  ConvexityReport c = convexity_check(H, rng);
  CHECK(c.support_ok);
  CHECK(c.differences_ok);

  BendingCocycleSample bc = bending_cocycle_from_hull(H, x.in.rho, x.b.base_point);
  CohomologousReport cr = compare_cocycles(x.in.rho, bc.psi, x.b.phi);
  CHECK(cr.relative < 1e-2);
  // a1 and b1 move the base region without crossing a lift of m
  double scale = bc.psi.norm();
  CHECK(bc.psi.values[0].norm() < 1e-6 * scale);
  CHECK(bc.psi.values[1].norm() < 1e-6 * scale);
  CHECK(bc.psi.values[2].norm() > 1e-3 * scale);

  LocalizationReport loc = localization(H, x.in);
  CHECK(loc.leaves > 0);
  CHECK(loc.max_distance < 5e-2);
}

TEST_CASE("support planes are equivariant") {
  const Bent& x = bent();
  const Vec3 p = x.b.base_point;
  Covec4 base;
  base << facet_over(x.H, p).alpha, 1.0;
  for (const char* w : {"a1", "b1", "a2", "b2"}) {
    Word g = parse_word(w);
    Covec4 moved = base * x.b.eta(g).inverse();
    moved /= moved(3);
    Covec3 there = facet_over(x.H, x.in.rho(g) * p).alpha;
    CAPTURE(w);
    CHECK((moved.head<3>() - there).norm() < 1e-6 * (1 + there.norm()));
  }
}

TEST_CASE("shallow samples do not resolve the hull") {
  const Bent& x = bent();
  for (int L : {1, 2, 3}) {
    HullOptions o;
    o.L = L;
    try {
      HullComplex H = build_hull(x.b.eta, o);
      bending_cocycle_from_hull(H, x.in.rho, x.b.base_point);
      FAIL("lookup succeeded at depth " << L);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FacetLookupFailed);
    }
  }
}

TEST_CASE("small bending keeps two disks that refine with depth") {
  BendingInput in;
  in.rho = default_hitchin();
  in.spiral = default_spiral();
  in.t = 0.1;
  BendingResult b = bend_representation(in);
  std::size_t prev = 0;
  for (int L : {6, 8}) {
    HullOptions o;
    o.L = L;
    HullComplex H = build_hull(b.eta, o);
    CHECK(H.upper_count > 0);
    CHECK(H.lower_count > 0);
    CHECK(H.hull.facets.size() > prev);
    prev = H.hull.facets.size();
  }
}

TEST_CASE("measure against the bending cocycle") {
  const Bent& x = bent(8, 3);
  double w0 = strand_weight_scale(x.in, x.b);
  AtomicEquivariantMeasure mu = atomic_measure_from_spiral(x.in.rho, x.in.spiral, w0);
  MeasureCheck one = measure_vs_cocycle_check(x.H, x.in, x.b, mu, 2, 1);
  CHECK(one.rel_error_atomic < 5e-2);
  CHECK(one.rel_error_leaves < 1e-6);
  CHECK(one.crossings >= 1);

  MeasureCheck rev = measure_vs_cocycle_check(x.H, x.in, x.b, mu, 2, 1, true);
  CHECK((rev.hull_value + one.hull_value).norm() < 1e-12 * one.hull_value.norm());

  // consecutive transversals share an endpoint, so psi adds up along them
  MeasureCheck next = measure_vs_cocycle_check(x.H, x.in, x.b, mu, 3, 1);
  MeasureCheck both = measure_vs_cocycle_check(x.H, x.in, x.b, mu, 2, 2);
  CHECK((both.hull_value - one.hull_value - next.hull_value).norm() < 1e-9 * both.hull_value.norm());
  Covec3 parts = Covec3::Zero();
  for (const Covec3& p : both.partials) parts += p;
  CHECK((parts - both.hull_value).norm() < 1e-9 * both.hull_value.norm());
  CHECK(both.rel_error_leaves < 1e-5);

  CHECK_THROWS_AS(measure_vs_cocycle_check(x.H, x.in, x.b, mu, 0, 1), Error);
}

TEST_CASE("hull outputs") {
  const HullComplex& H = bent().H;
  std::ostringstream off;
  write_off(off, H);
  CHECK(off.str().rfind("OFF", 0) == 0);
  nlohmann::json j = to_json(H);
  CHECK(j["depth"] == 8);
  CHECK(hull_svg(H).find("<svg") != std::string::npos);
}
