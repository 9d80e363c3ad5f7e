#include "cclab/coaffine.hpp"

#include "doctest.h"
#include "gen.hpp"

using namespace cclab;

namespace {
const HitchinRep& rho() {
  static const HitchinRep r = default_hitchin();
  return r;
}
Cocycle random_cocycle(gen::Rng& r, const CocycleSpace& Z) {
  Cocycle c = Cocycle::zero(4);
  for (const Cocycle& b : Z.basis) c = c + gen::uniform(r, -1, 1) * b;
  return c;
}
}  // namespace

TEST_CASE("cocycle space basis") {
  CocycleSpace Z = cocycle_space_basis(rho());
  REQUIRE(Z.basis.size() == 9);
  for (const Cocycle& c : Z.basis) {
    CHECK(cocycle_residual(rho(), c) < 1e-9);
    CHECK(c.norm() == doctest::Approx(1));
    CHECK(cocycle_residual(rho(), 7.5 * c) < 1e-8);
  }
  CHECK(Z.constraint.gap >= 1e3);
}

TEST_CASE("cohomology dimensions at genus two") {
  Cohomology h = cohomology_dimensions(rho());
  CHECK(h.dim_z1 == 9);
  CHECK(h.dim_b1 == 3);
  CHECK(h.dim_h1 == 6);
  CHECK(coboundary_rank(rho()).rank == 3);
  CHECK(cohomology_dimensions(sym_square(default_fuchsian(2))).dim_h1 == 6);
}

TEST_CASE("numeric rank demands a gap") {
  MatX M = MatX::Zero(3, 3);
  M.diagonal() << 1, 1e-2, 1e-14;
  CHECK(numeric_rank(M).rank == 2);
  M.diagonal() << 1, 1e-7, 1e-9;  // cut falls between two values only 100 apart
  CHECK_THROWS_AS(numeric_rank(M), Error);
}

TEST_CASE("cocycle values satisfy the cocycle identity") {
  gen::Rng r(41);
  CocycleSpace Z = cocycle_space_basis(rho());
  Cocycle phi = random_cocycle(r, Z);
  CHECK(cocycle_value(rho(), phi, Word()).norm() == 0.0);
  for (int i = 0; i < 100; ++i) {
    Word u = gen::raw_word(r, 4), v = gen::raw_word(r, 4);
    Covec3 pu = cocycle_value(rho(), phi, u), pv = cocycle_value(rho(), phi, v);
    Covec3 lhs = cocycle_value(rho(), phi, concat(u, v));
    Covec3 rhs = pu + dual_action(rho()(u), pv);
    // the words' matrices reach 1e7, so rounding scales with |rho(u)| |rho(u)^-1|
    double cond = rho()(u).norm() * rho()(inverse(u)).norm();
    CHECK((lhs - rhs).norm() < 1e-12 * cond * (1 + pu.norm() + pv.norm()) * (1 + rho()(v).norm()));
  }
}

TEST_CASE("coboundaries") {
  CHECK(coboundary(rho(), Covec3::Zero()).norm() == 0.0);
  gen::Rng r(42);
  for (int i = 0; i < 20; ++i) {
    Covec3 v = gen::covec(r);
    Cocycle b = coboundary(rho(), v);
    CHECK(cocycle_residual(rho(), b) < 1e-9);
    Witness w = reducibility_witness(rho(), b);
    REQUIRE(w.translation.has_value());
    CoaffineRep eta = assemble(rho(), b);
    CHECK(w.plane_residual < 1e-9);
    Witness we = reducibility_witness(eta);
    CHECK(we.translation.has_value());
  }
}

TEST_CASE("witness refuses cocycles with a cohomology class") {
  CocycleSpace Z = cocycle_space_basis(rho());
  // a cocycle orthogonal to B1: project a basis vector off the coboundaries
  MatX B(12, 3);
  for (int k = 0; k < 3; ++k) B.col(k) = coboundary(rho(), Covec3::Unit(k)).flat();
  Eigen::HouseholderQR<MatX> qr(B);
  MatX Q = qr.householderQ() * MatX::Identity(12, 3);
  VecX h = Z.basis[0].flat();
  for (const Cocycle& c : Z.basis) {
    VecX x = c.flat() - Q * (Q.transpose() * c.flat());
    if (x.norm() > h.norm()) h = x;
  }
  h -= Q * (Q.transpose() * h);
  Cocycle phi = coboundary(rho(), Covec3(0.2, 0.1, -0.4)) + 0.1 * Cocycle::from_flat(h / h.norm());
  Witness w = reducibility_witness(rho(), phi);
  CHECK_FALSE(w.translation.has_value());
  CHECK(w.residual > 1e3 * tol().rank_eps);

  Witness z = reducibility_witness(rho(), Cocycle::zero(4));
  REQUIRE(z.translation.has_value());
  CHECK(z.translation->tau.norm() == 0.0);
}

TEST_CASE("coaffine assembly") {
  gen::Rng r(43);
  CocycleSpace Z = cocycle_space_basis(rho());
  Cocycle phi = random_cocycle(r, Z);
  CoaffineRep eta = assemble(rho(), phi);
  CHECK(relator_residual(eta) < 1e-9);
  Cocycle back = extract_cocycle(eta);
  CHECK((back - phi).norm() < 1e-10);
  for (int i = 0; i < 30; ++i) {
    Word w = gen::raw_word(r, 6);
    CHECK((eta(w) * eta(inverse(w)) - Mat4::Identity()).norm() < 1e-9 * (1 + eta(w).squaredNorm()));
  }
  CoaffineRep eta0 = assemble(rho(), Cocycle::zero(4));
  for (int k = 0; k < 4; ++k) CHECK((eta0.images[k].block<1, 3>(3, 0)).norm() == 0.0);

  Cocycle junk = Cocycle::zero(4);
  for (auto& v : junk.values) v = gen::covec(r);
  CHECK_THROWS_AS(assemble(rho(), junk), Error);
}

TEST_CASE("translations along a leaf") {
  Flag minus{Vec3::UnitX(), Covec3(0, 0, 1)}, plus{Vec3::UnitZ(), Covec3(1, 0, 0)};
  CHECK((z_translation(minus, plus, 0).matrix() - Mat4::Identity()).norm() == 0.0);
  Mat4 a = z_translation(minus, plus, 0.3).matrix(), b = z_translation(minus, plus, 1.2).matrix();
  CHECK((a * b - z_translation(minus, plus, 1.5).matrix()).norm() < 1e-15);
  Covec3 l = leaf_covector(minus, plus);
  CHECK(std::abs(l * minus.point) < 1e-15);
  CHECK(std::abs(l * plus.point) < 1e-15);
  for (double lam : {2.0, 0.3, -5.0}) {
    Mat4 A = coaffine_block(Vec3(lam, 1, 1 / lam).asDiagonal(), Covec3::Zero());
    CHECK((A * a - a * A).norm() < 1e-14);
  }
  gen::Rng r(44);
  for (int i = 0; i < 20; ++i) {
    Mat3 g = gen::sl3(r);
    Flag gm{g * minus.point, dual_action(g, minus.line)}, gp{g * plus.point, dual_action(g, plus.line)};
    Covec3 lg = leaf_covector(gm, gp);
    CHECK(std::abs(lg * gm.point) < 1e-12 * gm.point.norm() * lg.norm());
    CHECK(std::abs(lg * gp.point) < 1e-12 * gp.point.norm() * lg.norm());
  }
  CHECK_THROWS_AS(leaf_covector(minus, minus), Error);
}

TEST_CASE("cocycle json round trip") {
  gen::Rng r(45);
  Cocycle phi = random_cocycle(r, cocycle_space_basis(rho()));
  Cocycle back = cocycle_from_json(to_json(phi), 2);
  CHECK((back - phi).norm() == 0.0);
}
