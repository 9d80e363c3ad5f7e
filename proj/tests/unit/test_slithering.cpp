#include "cclab/bending.hpp"
#include "cclab/slithering.hpp"

#include "doctest.h"
#include "gen.hpp"

using namespace cclab;

namespace {
Flag random_flag(gen::Rng& r) {
  Vec3 p = gen::vec(r).normalized();
  Covec3 l = gen::covec(r);
  l -= (l * p) * p.transpose();
  return {p, l.normalized()};
}
bool maps_flag(const Mat3& M, const Flag& a, const Flag& b, double eps) {
  return proj_dist(M * a.point, b.point) < eps &&
         proj_dist((a.line * M.inverse()).transpose(), b.line.transpose()) < eps;
}
}  // namespace

TEST_CASE("elementary slithering maps") {
  gen::Rng r(71);
  for (int i = 0; i < 100; ++i) {
    Flag a = random_flag(r), b = random_flag(r), c = random_flag(r);
    LeafFlags g{a, b, "g"}, h{a, c, "h"};
    REQUIRE(find_shared(g, h) == SharedEnd::MinusMinus);
    Mat3 M = elementary_slither(g, h).M;
    Mat3 N = M - Mat3::Identity();
    CHECK((N * N * N).norm() < 1e-10 * (1 + N.norm() * N.norm() * N.norm()));
    CHECK(std::abs(M.determinant() - 1) < 1e-12 * (1 + std::pow(M.norm(), 3)));
    CHECK(maps_flag(M, a, a, 1e-9));
    CHECK(maps_flag(M, b, c, 1e-9));
    Mat3 back = elementary_slither(h, g).M;
    CHECK((M * back - Mat3::Identity()).norm() < 1e-8 * (1 + M.norm() * back.norm()));
    CHECK((elementary_slither(g, g).M - Mat3::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("chains of asymptotic leaves compose") {
  gen::Rng r(72);
  for (int i = 0; i < 50; ++i) {
    Flag a = random_flag(r);
    LeafFlags g0{a, random_flag(r), "0"}, g1{a, random_flag(r), "1"}, g2{a, random_flag(r), "2"};
    Mat3 direct = elementary_slither(g1, g2).M * elementary_slither(g0, g1).M;
    Mat3 chain = chain_slither({g0, g1, g2}).M;
    CHECK((chain - direct).norm() < 1e-9 * (1 + direct.norm()));
    CHECK((chain_slither({g0, g1}).M - elementary_slither(g0, g1).M).norm() < 1e-12);
  }
}

TEST_CASE("leaves without a common end cannot slither") {
  gen::Rng r(73);
  LeafFlags g{random_flag(r), random_flag(r), "g"}, h{random_flag(r), random_flag(r), "h"};
  CHECK_THROWS_AS(find_shared(g, h), Error);
}

TEST_CASE("triangle holonomy") {
  TriangleHolonomy f =
      triangle_holonomy(sym_square(default_fuchsian(2)), parse_word("a1"), parse_word("b1"), parse_word("a2"));
  CHECK(f.triple_ratio == doctest::Approx(1).epsilon(1e-8));
  CHECK(f.square_distance < 1e-8);
  TriangleHolonomy b = triangle_holonomy(default_hitchin(), parse_word("a1"), parse_word("b2"), parse_word("a2"));
  CHECK(b.square_distance > 1e3 * tol().rank_eps);
  CHECK(std::abs(b.triple_ratio - 1) > 1e-3);
  CHECK(b.composite.determinant() == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("spiral chain converges geometrically") {
  HitchinRep rho = default_hitchin();
  SpiralConfig s = default_spiral();
  LeafFlags m = spiral_leaf_flags(rho, s);
  SpiralChain sc = spiral_slither(m, rho(s.c1), rho(inverse(s.c1)));
  CHECK(sc.decay_ratio < 1);
  CHECK(sc.tail_estimate < 1e-10);
  REQUIRE(sc.factor_norms.size() >= 3);
  for (std::size_t k = 2; k < sc.factor_norms.size(); ++k)
    if (sc.factor_norms[k - 1] > 1e-12) CHECK(sc.factor_norms[k] < sc.factor_norms[k - 1]);
}

TEST_CASE("holonomy character") {
  HitchinRep fuchs = sym_square(default_fuchsian(2));
  HolonomyCharacter one = slither_character(fuchs, spiral_track_loops(fuchs, default_spiral()));
  for (const auto& [id, v] : one.values) CHECK(std::abs(v) == doctest::Approx(1).epsilon(1e-8));
  CHECK(std::abs(loop_character(fuchs, closed_leaf_loop(fuchs, parse_word("a1 b2"), "x"))) ==
        doctest::Approx(1).epsilon(1e-8));

  HitchinRep rho = default_hitchin();
  for (const char* w : {"b2", "a2", "a1 b2"}) {
    Word c = parse_word(w);
    double chi = loop_character(rho, closed_leaf_loop(rho, c, w));
    CHECK(std::abs(chi) == doctest::Approx(1 / middle_eigen_data(rho, c).l2).epsilon(1e-6));
    double chi2 = loop_character(rho, closed_leaf_loop(rho, power(c, 2), w));
    CHECK(chi2 == doctest::Approx(chi * chi).epsilon(1e-8));
  }
  HolonomyCharacter chi = slither_character(rho, spiral_track_loops(rho, default_spiral()));
  CHECK(chi.values.count("c1") == 1);
  CHECK(chi.values.count("c2") == 1);
  CHECK(std::abs(chi.values["c1"]) == doctest::Approx(1 / middle_eigen_data(rho, parse_word("b2")).l2).epsilon(1e-8));
}

TEST_CASE("leaf flag actions") {
  HitchinRep rho = default_hitchin();
  LeafFlags ax = axis_flags(rho, parse_word("b2"));
  LeafFlags moved = act(rho(parse_word("b2")), ax);
  CHECK(same_flag(moved.minus, ax.minus, 1e-9));
  CHECK(same_flag(moved.plus, ax.plus, 1e-9));
  LeafFlags rv = reversed(ax);
  CHECK(same_flag(rv.minus, ax.plus, 1e-15));
  Vec3 mid = middle_line(ax);
  CHECK(proj_dist(rho(parse_word("b2")) * mid, mid) < 1e-9);
}
