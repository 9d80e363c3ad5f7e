#include "cclab/hitchin.hpp"

#include "doctest.h"
#include "gen.hpp"

using namespace cclab;

TEST_CASE("symmetric square of the octagon group") {
  HitchinRep rho = sym_square(default_fuchsian(2));
  CHECK(relator_residual(rho) < 1e-8);
  CHECK(rho.provenance == "fuchsian");
  gen::Rng r(31);
  for (int i = 0; i < 50; ++i) {
    Word w = cyclic_reduce(gen::reduced_word(r, 1 + i % 6));
    if (w.empty()) continue;
    MiddleEigen e = middle_eigen_data(rho, w);
    CHECK(e.l2 == doctest::Approx(1).epsilon(1e-10));
    CHECK(e.l1 * e.l2 * e.l3 == doctest::Approx(1).epsilon(1e-9));
  }
}

TEST_CASE("bulging") {
  HitchinRep rho = sym_square(default_fuchsian(2));
  HitchinRep same = bulge(rho, 0.0);
  for (int k = 0; k < 4; ++k) CHECK((same.images[k] - rho.images[k]).norm() < 1e-14);

  HitchinRep b = bulge(rho, 0.5);
  Word c = commutator(parse_word("a1"), parse_word("b1"));
  CHECK((b(c) - rho(c)).norm() < 1e-10 * rho(c).norm());
  CHECK(relator_residual(b) < 1e-8);
  CHECK(relator_residual(handle_bulge(b, 2, 0.5)) < 1e-8);
  CHECK((bulge_conjugator(rho, 0.0) - Mat3::Identity()).norm() < 1e-14);
  CHECK(bulge_conjugator(rho, 0.7).determinant() == doctest::Approx(1));
}

TEST_CASE("the default bulged representation leaves the Fuchsian locus") {
  HitchinRep rho = default_hitchin();
  CHECK(rho.provenance == "bulged");
  CHECK(relator_residual(rho) < 1e-8);
  for (int k = 0; k < 4; ++k) CHECK(rho.images[k].determinant() == doctest::Approx(1).epsilon(1e-12));
  MiddleEigen e = middle_eigen_data(rho, parse_word("b2"));
  CHECK(std::abs(e.l2 - 1) > 1e-3);
  CHECK(e.l1 * e.l2 * e.l3 == doctest::Approx(1).epsilon(1e-10));
  Word w = first_middle_gap_word(rho, 4, 1e-3);
  CHECK_FALSE(w.empty());
  CHECK(torus_side(Presentation{}, w) == TorusSide::Mixed);
  CHECK(std::abs(middle_eigen_data(rho, w).l2 - 1) > 1e-3);
  // the separating bulge alone is invisible to simple curves
  HitchinRep sep = bulge(sym_square(default_fuchsian(2)), 0.5);
  CHECK(middle_eigen_data(sep, parse_word("b2")).l2 == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("limit curve of the Fuchsian locus lies on the conic") {
  LimitSample s = sample_limit_curve(sym_square(default_fuchsian(2)), 3);
  REQUIRE(s.entries.size() > 50);
  double worst = 0;
  for (const auto& e : s.entries) {
    Vec3 x = e.flag.point.normalized();
    worst = std::max(worst, std::abs(x(0) * x(2) - x(1) * x(1)));
  }
  CHECK(worst < 1e-6);
  for (std::size_t i = 1; i < s.entries.size(); ++i) CHECK(s.entries[i - 1].point.angle <= s.entries[i].point.angle);
}

TEST_CASE("limit flags are pairwise transverse") {
  LimitSample s = sample_limit_curve(default_hitchin(), 3);
  CHECK(min_transversality(s) > 0);
  for (std::size_t i = 1; i < s.entries.size(); ++i) CHECK(s.entries[i].point.angle > s.entries[i - 1].point.angle);
  // w and its inverse give two different boundary points
  HitchinRep rho = default_hitchin();
  for (const char* w : {"a1", "b2", "a1 b2"}) {
    Word c = parse_word(w);
    CHECK(proj_dist(attracting_flag(rho(c)).point, attracting_flag(rho(inverse(c))).point) > 1e-3);
  }
}

TEST_CASE("cone chart is positive on the limit curve") {
  HitchinRep rho = default_hitchin();
  ConeChart c = cone_chart(rho, 4);
  CHECK(c.margin > 0);
  for (const auto& e : sample_limit_curve(rho, 3).entries) CHECK(c.kappa * cone_lift(c, e.flag.point) > 0);
}

TEST_CASE("loxodromy certificate") {
  LoxodromyReport f = loxodromy_certificate(sym_square(default_fuchsian(2)), 4);
  CHECK(f.ok);
  CHECK(f.min_gap_ratio > 1);
  LoxodromyReport b = loxodromy_certificate(default_hitchin(), 4);
  CHECK(b.ok);
  CHECK(b.words_checked > 0);
}
