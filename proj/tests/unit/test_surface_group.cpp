#include "cclab/surface_group.hpp"

#include "doctest.h"
#include "gen.hpp"

#include <cmath>
#include <numbers>

using namespace cclab;

namespace {
Mat2 psl_close(const Mat2& A) { return A(0, 0) + A(1, 1) < 0 ? Mat2(-A) : A; }
}  // namespace

TEST_CASE("word algebra") {
  gen::Rng r(21);
  for (int i = 0; i < 300; ++i) {
    Word u = gen::raw_word(r, 12), v = gen::raw_word(r, 12);
    Word ru = reduce(u);
    CHECK(reduce(ru) == ru);
    CHECK(reduce(concat(u, inverse(u))).empty());
    CHECK(inverse(inverse(u)) == u);
    CHECK(concat(u, v) == reduce(Word([&] {
            auto l = u.letters;
            l.insert(l.end(), v.letters.begin(), v.letters.end());
            return l;
          }())));
    CHECK(power(ru, 3).size() <= 3 * ru.size());
    CHECK(is_cyclically_reduced(cyclic_reduce(u)));
  }
  CHECK(to_string(commutator(parse_word("a1"), parse_word("b1"))) == "a1 b1 A1 B1");
}

TEST_CASE("word parsing round trip") {
  gen::Rng r(22);
  for (int i = 0; i < 100; ++i) {
    Word w = gen::raw_word(r, 10);
    CHECK(parse_word(to_string(w)) == reduce(w));
  }
  CHECK(parse_word("a1 B2").letters == std::vector<int>{1, -4});
  CHECK_THROWS_AS(parse_word("c1"), Error);
  CHECK_THROWS_AS(parse_word("a3"), Error);
  CHECK(generator_name(3) == "b2");
}

TEST_CASE("reduced word enumeration counts") {
  for (int n = 1; n <= 4; ++n) {
    auto ws = reduced_words(2, n);
    CHECK(ws.size() == static_cast<std::size_t>(8 * std::pow(7, n - 1)));
    for (const Word& w : ws) CHECK(reduce(w) == w);
  }
}

TEST_CASE("the octagon group") {
  FuchsianRep F = default_fuchsian(2);
  CHECK(relator_residual(F) < 1e-8);
  Presentation P;
  Mat2 R = psl_close(F(P.relator()));
  CHECK((R - Mat2::Identity()).norm() < 1e-8);
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(F.images[k].trace()) > 2);
    CHECK(std::abs(F.images[k].determinant() - 1) < 1e-12);
  }
  CHECK_FALSE(linked(axis_endpoints(F, parse_word("a1")), axis_endpoints(F, parse_word("a2"))));
  CHECK(linked(axis_endpoints(F, parse_word("a1")), axis_endpoints(F, parse_word("b1"))));
  CHECK_THROWS_AS(default_fuchsian(3), Error);
}

TEST_CASE("evaluation is a homomorphism") {
  FuchsianRep F = default_fuchsian(2);
  CHECK((F(Word()) - Mat2::Identity()).norm() == 0.0);
  gen::Rng r(23);
  for (int i = 0; i < 100; ++i) {
    Word u = gen::raw_word(r, 8), v = gen::raw_word(r, 8);
    Mat2 a = F(concat(u, v)), b = F(u) * F(v);
    CHECK((a - b).norm() < 1e-9 * (1 + b.norm()));
    CHECK((F(u) * F(inverse(u)) - Mat2::Identity()).norm() < 1e-9 * (1 + F(u).squaredNorm()));
  }
}

TEST_CASE("boundary action") {
  Mat2 D = Eigen::Vector2d(3, 1.0 / 3).asDiagonal();
  Chord c = axis_endpoints(D);
  CHECK(angular_distance(c.first, c.second) == doctest::Approx(std::numbers::pi));
  Chord rev = axis_endpoints(Mat2(D.inverse()));
  CHECK(angular_distance(rev.first, c.second) < 1e-12);
  CHECK(angular_distance(rev.second, c.first) < 1e-12);
  CHECK(angular_distance(mobius(D, c.first), c.first) < 1e-12);

  gen::Rng r(24);
  FuchsianRep F = default_fuchsian(2);
  for (int i = 0; i < 50; ++i) {
    Word w = gen::reduced_word(r, 3), g = gen::reduced_word(r, 4);
    Word conj = reduce(concat(concat(g, w), inverse(g)));
    if (conj.empty()) continue;
    Chord a = axis_endpoints(F, w), b = axis_endpoints(F, conj);
    CHECK(angular_distance(mobius(F(g), a.first), b.first) < 1e-8);
    CHECK(angular_distance(mobius(F(g), a.second), b.second) < 1e-8);
  }
  for (int i = 0; i < 50; ++i) {
    Mat2 A = gen::sl2(r), B = gen::sl2(r);
    BoundaryPoint p{gen::uniform(r, 0, 2 * std::numbers::pi)};
    CHECK(angular_distance(mobius(A * B, p), mobius(A, mobius(B, p))) < 1e-9);
  }
}

TEST_CASE("chords") {
  auto pt = [](double a) { return BoundaryPoint{a}; };
  CHECK(linked({pt(0), pt(2)}, {pt(1), pt(3)}));
  CHECK_FALSE(linked({pt(0), pt(1)}, {pt(2), pt(3)}));
  CHECK_FALSE(linked({pt(0), pt(2)}, {pt(2), pt(4)}));
  CHECK(shares_endpoint({pt(0), pt(2)}, {pt(2), pt(4)}));
}

TEST_CASE("torus sides") {
  Presentation P;
  CHECK(torus_side(P, parse_word("a1 b1")) == TorusSide::T1);
  CHECK(torus_side(P, parse_word("a2")) == TorusSide::T2);
  CHECK(torus_side(P, parse_word("a1 a2")) == TorusSide::Mixed);
}

TEST_CASE("symmetric square") {
  gen::Rng r(25);
  double l = 2.5;
  Mat2 D = Eigen::Vector2d(l, 1 / l).asDiagonal();
  Vec3 ev = sym2_matrix(D).diagonal();
  CHECK(ev.maxCoeff() == doctest::Approx(l * l));
  CHECK(ev.minCoeff() == doctest::Approx(1 / (l * l)));
  for (int i = 0; i < 100; ++i) {
    Mat2 A = gen::sl2(r), B = gen::sl2(r);
    CHECK((sym2_matrix(A * B) - sym2_matrix(A) * sym2_matrix(B)).norm() < 1e-10 * (1 + (A * B).squaredNorm()));
    CHECK((sym2_matrix(-A) - sym2_matrix(A)).norm() == 0.0);
    BoundaryPoint p{gen::uniform(r, 0, 6)};
    CHECK(proj_dist(sym2_matrix(A) * klein_boundary(p), klein_boundary(mobius(A, p))) < 1e-9);
  }
}

TEST_CASE("the default spiral leaf is simple") {
  FuchsianRep F = default_fuchsian(2);
  SpiralConfig s{parse_word("b2"), parse_word("b2"), parse_word("a2")};
  CHECK(curve_simple(F, s.c1, 3));
  CHECK(spiral_simple(F, s, 3));
  CHECK(curves_disjoint(F, parse_word("a1"), parse_word("a2"), 3));
  CHECK_FALSE(curves_disjoint(F, parse_word("a1"), parse_word("b1"), 3));
  Chord m = spiral_leaf(F, s);
  Chord c1 = axis_endpoints(F, s.c1);
  CHECK(angular_distance(m.first, c1.second) < 1e-9);
}
