#include "cclab/bending.hpp"
#include "cclab/slithering.hpp"

#include "doctest.h"
#include "gen.hpp"

using namespace cclab;

namespace {
BendingInput default_input(double t = 1.0) {
  BendingInput in;
  in.rho = default_hitchin();
  in.spiral = default_spiral();
  in.t = t;
  return in;
}
const BendingResult& bent() {
  static const BendingResult b = bend_representation(default_input());
  return b;
}
Covec3 tail_covector(const HitchinRep& rho, const EigenBasis3& e, const SpiralConfig& s) {
  LeafFlags m = spiral_leaf_flags(rho, s);
  Covec3 beta = leaf_covector(m.minus, m.plus) * e.V;
  beta(2) = 0;
  return beta * e.V.inverse();
}
}  // namespace

TEST_CASE("geometric tail sums") {
  BendingInput in = default_input();
  EigenBasis3 e = eigen_basis(in.rho(in.spiral.c1), in.rho(inverse(in.spiral.c1)));
  Covec3 tau = tail_covector(in.rho, e, in.spiral);
  CHECK(geometric_tail_sum(e, Covec3::Zero(), 10).B.tau.norm() == 0.0);

  int N = 1;
  while (geometric_tail_sum(e, tau, N).bound >= 1e-12) ++N;
  RegionSum s = geometric_tail_sum(e, tau, N);
  CHECK((s.B.tau - s.closed_form).norm() < 1e-10 * s.closed_form.norm());

  for (int n : {5, 10, 20}) {
    RegionSum a = geometric_tail_sum(e, tau, n), b = geometric_tail_sum(e, tau, 2 * n);
    CHECK((a.B.tau - b.B.tau).norm() <= a.bound * (1 + 1e-9));
    CHECK((a.B.tau - a.closed_form).norm() <= a.bound * (1 + 1e-9));
    // partial sum plus closed-form tail is the whole series
    CHECK((a.B.tau + tail_closed_form(e, tau, n + 1) - a.closed_form).norm() < 1e-10 * a.closed_form.norm());
  }
  // a covector seeing the repelling direction makes the series diverge
  Covec3 bad = tau + e.left3;
  CHECK_THROWS_AS(geometric_tail_sum(e, bad, 10), Error);
}

TEST_CASE("bending the default representation") {
  const BendingResult& b = bent();
  CHECK(b.relator_residual < 1e-8);
  CHECK(relator_residual(b.eta) < 1e-8);
  CHECK(cocycle_residual(default_hitchin(), b.phi) < 1e-8);
  Witness w = reducibility_witness(default_hitchin(), b.phi);
  CHECK_FALSE(w.translation.has_value());
  CHECK(w.residual > 1e3 * tol().rank_eps);
  // the handle generators a1, b1 are never separated from the base region by m
  CHECK(b.sums[0].b.norm() == 0.0);
  CHECK(b.sums[1].b.norm() == 0.0);
  CHECK(b.sums[2].b.norm() > 0.0);
}

TEST_CASE("zero bending") {
  BendingResult z = bend_representation(default_input(0.0));
  CHECK(z.phi.norm() == 0.0);
  for (int k = 0; k < 4; ++k) CHECK((z.eta.images[k].topLeftCorner<3, 3>() - default_hitchin().images[k]).norm() == 0.0);
}

TEST_CASE("bending is linear in t") {
  BendingResult h = bend_representation(default_input(0.5));
  CHECK((2.0 * h.phi - bent().phi).norm() < 1e-12 * bent().phi.norm());
}

TEST_CASE("conjugating by a scaling rescales the translation part") {
  gen::Rng r(51);
  for (int i = 0; i < 5; ++i) {
    double s = gen::uniform(r, 0.2, 3.0);
    CoaffineRep c = conjugate(bent().eta, scaling_conjugator(s, -1.0 / 3, 1.0));
    Cocycle phi = extract_cocycle(c);
    CHECK((phi - std::pow(s, 4.0 / 3) * bent().phi).norm() < 1e-10 * phi.norm());
    CHECK(relator_residual(c) < 1e-8);
  }
  CHECK_THROWS_AS(scaling_conjugator(-1, 0, 1), Error);
}

TEST_CASE("reversed spiral does not bend") {
  BendingInput in = default_input();
  in.spiral = reversed(in.spiral);
  try {
    bend_representation(in);
    FAIL("reversed spiral bent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Divergent);
  }
}

TEST_CASE("Anosov certificate") {
  CoaffineRep eta0 = assemble(default_hitchin(), Cocycle::zero(4));
  AnosovReport a0 = anosov_certificate(eta0, 5);
  CHECK(a0.pass);
  CHECK(a0.slope > 0);
  BendingResult small = bend_representation(default_input(0.05));
  AnosovReport a = anosov_certificate(small.eta, 5);
  CHECK(a.pass);
  CHECK(a.e4_margin > 0);
}
