#include "cclab/core.hpp"

#include "doctest.h"
#include "gen.hpp"

using namespace cclab;

TEST_CASE("dual action fixes alpha under the identity") {
  Covec3 a(0.3, -1.0, 2.0);
  CHECK((dual_action(Mat3(Mat3::Identity()), a) - a).norm() == 0.0);
}

TEST_CASE("dual action preserves the pairing") {
  gen::Rng r(11);
  for (int i = 0; i < 200; ++i) {
    Mat3 A = gen::sl3(r);
    Covec3 a = gen::covec(r);
    Vec3 v = gen::vec(r);
    double before = a * v, after = dual_action(A, a) * (A * v);
    CHECK(std::abs(before - after) < 1e-12 * (1 + A.norm() * A.inverse().norm()));
  }
}

TEST_CASE("dual action carries kernels to kernels") {
  Mat3 A;
  A << 2, 1, 0, 0, 1, 3, 1, 0, 1;
  Covec3 a(1, -2, 0);
  Vec3 v(2, 1, 5);  // a.v = 0
  CHECK(std::abs(dual_action(A, a) * (A * v)) < 1e-13);
}

TEST_CASE("dual action rejects singular matrices") {
  Mat3 A = Mat3::Zero();
  A(0, 0) = 1;
  CHECK_THROWS_AS(dual_action(A, Covec3(1, 0, 0)), Error);
}

TEST_CASE("eigen_sorted on a diagonal matrix") {
  Mat3 D = Vec3(1, 4, 2).asDiagonal();
  auto e = eigen_sorted(D);
  REQUIRE(e.size() == 3);
  CHECK(e[0].value == doctest::Approx(4));
  CHECK(e[1].value == doctest::Approx(2));
  CHECK(e[2].value == doctest::Approx(1));
  CHECK(proj_dist(e[0].vector, Vec3::UnitY()) < 1e-14);
  CHECK(proj_dist(e[1].vector, Vec3::UnitZ()) < 1e-14);
}

TEST_CASE("symmetric square spectrum") {
  double l = 1.7;
  Mat3 S = Vec3(l * l, 1, 1 / (l * l)).asDiagonal();
  Mat3 P;
  P << 1, 2, 0, 0, 1, 1, 1, 0, 1;
  auto e = eigen_sorted(P * S * P.inverse());
  CHECK(e[0].value == doctest::Approx(l * l));
  CHECK(e[1].value == doctest::Approx(1));
  CHECK(e[2].value == doctest::Approx(1 / (l * l)));
}

TEST_CASE("complex spectrum and near multiple spectrum are refused") {
  Mat3 R = Mat3::Identity();
  R.block<2, 2>(0, 0) << 0, -1, 1, 0;
  CHECK_THROWS_AS(eigen_sorted(R), Error);
  Mat3 D = Vec3(2, 2 + 1e-14, 0.25).asDiagonal();
  CHECK_THROWS_AS(eigen_basis(D), Error);
}

TEST_CASE("attracting flag of a diagonal matrix") {
  Mat3 D = Vec3(4, 2, 1).asDiagonal();
  Flag f = attracting_flag(D);
  CHECK(proj_dist(f.point, Vec3::UnitX()) < 1e-14);
  CHECK(proj_dist(f.line.transpose(), Vec3::UnitZ()) < 1e-14);
}

TEST_CASE("attracting flags are equivariant") {
  gen::Rng r(12);
  Mat3 D = Vec3(4, 2, 0.125).asDiagonal();
  for (int i = 0; i < 50; ++i) {
    Mat3 g = gen::sl3(r);
    Flag f = attracting_flag(g * D * g.inverse());
    CHECK(proj_dist(f.point, g * Vec3::UnitX()) < 1e-9);
    CHECK(proj_dist(f.line.transpose(), (dual_action(g, Covec3(0, 0, 1))).transpose()) < 1e-9);
  }
}

TEST_CASE("attracting and repelling flags are transverse") {
  gen::Rng r(13);
  Mat3 D = Vec3(5, 1.5, 1 / 7.5).asDiagonal();
  for (int i = 0; i < 50; ++i) {
    Mat3 g = gen::sl3(r);
    Mat3 A = g * D * g.inverse();
    Flag p = attracting_flag(A), m = attracting_flag(A.inverse());
    CHECK(transversality(p, m) > 1e-6);
    CHECK(proj_dist(repelling_flag(A).point, m.point) < 1e-9);
  }
}

TEST_CASE("canonical representative and projective distance") {
  Vec3 v(-2, 1, 0);
  Vec3 c = canonical(v);
  CHECK(c(0) > 0);
  CHECK(c.norm() == doctest::Approx(1));
  CHECK(proj_dist(v, -3 * v) < 1e-15);
  CHECK(proj_dist(Vec3::UnitX(), Vec3::UnitY()) == doctest::Approx(1));
  CHECK_THROWS_AS(canonical(Vec3(Vec3::Zero())), Error);
}
