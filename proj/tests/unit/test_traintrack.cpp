#include "cclab/lp.hpp"
#include "cclab/traintrack.hpp"

#include "doctest.h"
#include "gen.hpp"

using namespace cclab;

TEST_CASE("simplex on small programs") {
  MatX A(1, 2);
  A << 1, 2;
  VecX b(1), c(2);
  b << 4;
  c << 1, 1;
  LpResult r = solve_lp(A, b, c);
  REQUIRE(r.status == LpResult::Optimal);
  CHECK(r.objective == doctest::Approx(2));
  CHECK(r.x(1) == doctest::Approx(2));

  MatX A2(1, 2);
  A2 << 1, 1;
  VecX b2(1);
  b2 << -1;
  CHECK(solve_lp(A2, b2, c).status == LpResult::Infeasible);

  MatX A3(1, 2);
  A3 << 1, -1;
  VecX b3 = VecX::Zero(1), c3(2);
  c3 << -1, 0;
  CHECK(solve_lp(A3, b3, c3).status == LpResult::Unbounded);
}

TEST_CASE("simplex agrees with a brute-force vertex scan") {
  gen::Rng r(81);
  for (int trial = 0; trial < 40; ++trial) {
    MatX A(2, 4);
    for (int i = 0; i < 8; ++i) A(i / 4, i % 4) = gen::uniform(r, 0.1, 2);
    VecX b(2), c(4);
    b << gen::uniform(r, 0.5, 2), gen::uniform(r, 0.5, 2);
    for (int i = 0; i < 4; ++i) c(i) = gen::uniform(r, -1, 1);
    // positive entries: the feasible set is bounded, so an optimum sits on a basic solution
    double best = INFINITY;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        Eigen::Matrix2d B;
        B << A(0, i), A(0, j), A(1, i), A(1, j);
        if (std::abs(B.determinant()) < 1e-12) continue;
        Eigen::Vector2d x = B.inverse() * b;
        if (x.minCoeff() < -1e-12) continue;
        best = std::min(best, c(i) * x(0) + c(j) * x(1));
      }
    LpResult lp = solve_lp(A, b, c);
    if (best == INFINITY) {
      CHECK(lp.status == LpResult::Infeasible);
    } else {
      REQUIRE(lp.status == LpResult::Optimal);
      CHECK(lp.objective == doctest::Approx(best).epsilon(1e-9));
      CHECK((A * lp.x - b).norm() < 1e-9);
    }
  }
}

TEST_CASE("weight space dimensions") {
  CHECK(weight_space(single_loop_track()).dimension == 1);
  CHECK(weight_space(two_loops_track()).dimension == 2);
  CHECK(weight_space(maximal_genus2_track()).dimension == 6);
  TrainTrack m = maximal_genus2_track();
  CHECK(switch_matrix(m, {}).rows() == static_cast<int>(m.switches.size()));
  CHECK(switch_matrix(m, {}).cols() == static_cast<int>(m.branches.size()));
  for (const VecX& v : weight_space(m).basis) CHECK((switch_matrix(m, {}) * v).norm() < 1e-9);
}

TEST_CASE("a single loop carries weights only without twist") {
  TrainTrack t = single_loop_track();
  const std::string id = t.branches[0].id;
  auto w = affine_feasibility(t, {{id, 1.0}});
  REQUIRE(w.has_value());
  CHECK(w->residual(t) < 1e-12);
  AffineWeights big = scaled(*w, 3.0);
  CHECK(big.total_mass == doctest::Approx(3 * w->total_mass));
  CHECK(big.residual(t) < 1e-12);
  CHECK_FALSE(affine_feasibility(t, {{id, 0.8}}).has_value());
  CHECK_FALSE(affine_feasibility(t, {{id, 1.25}}).has_value());
  CHECK(cycle_multiplier(t, {{id, 0.8}}, {{0, 1}, {0, 1}}) == doctest::Approx(0.64));
}

TEST_CASE("Ungemach track with geometric loop masses") {
  TrainTrack u = ungemach_track();
  CHECK(orientable(u));
  gen::Rng r(82);
  for (int i = 0; i < 20; ++i) {
    double m1 = gen::uniform(r, 0.2, 0.95), m2 = gen::uniform(r, 0.2, 0.95);
    auto w = affine_feasibility(u, {{"loop1", m1}, {"loop2", m2}});
    REQUIRE(w.has_value());
    int e = u.branch_index("e"), l1 = u.branch_index("loop1"), l2 = u.branch_index("loop2");
    CHECK(w->w_start[e] > 0);
    CHECK(w->residual(u) < 1e-9);
    // the loop weight is the connector weight summed over all returns: w_e / (1 - m)
    CHECK(w->w_start[l1] == doctest::Approx(w->w_start[e] / (1 - m1)).epsilon(1e-8));
    CHECK(w->w_start[l2] == doctest::Approx(w->w_end(e) / (1 - m2)).epsilon(1e-8));
  }
  CHECK_FALSE(affine_feasibility(u, {{"loop1", 1.2}, {"loop2", 0.5}}).has_value());
}

TEST_CASE("orientation covers") {
  TrainTrack loop = single_loop_track();
  CHECK(orientable(loop));
  TrainTrack cover = orientation_cover(loop);
  CHECK(component_count(cover) == 2);
  CHECK(component_count(orientation_cover(cover)) == 4);
  TrainTrack one = one_sided_track();
  CHECK_FALSE(orientable(one));
  CHECK(component_count(orientation_cover(one)) == 1);
}

TEST_CASE("subdividing a branch") {
  TrainTrack u = ungemach_track();
  Multipliers m{{"loop1", 0.6}, {"loop2", 0.7}};
  TrainTrack s = subdivide(u, "loop1");
  Multipliers ms = subdivide(m, "loop1", 0.9);
  CHECK(s.branches.size() == u.branches.size() + 1);
  CHECK(weight_space(s).dimension == weight_space(u).dimension);
  CHECK(ms.at("loop1.a") * ms.at("loop1.b") == doctest::Approx(0.6));
  CHECK(affine_feasibility(s, ms).has_value());
}

TEST_CASE("malformed tracks are refused") {
  TrainTrack t = single_loop_track();
  t.branches[0].to = 7;
  CHECK_THROWS_AS(validate(t), Error);
  CHECK_THROWS_AS(affine_feasibility(single_loop_track(), {{"nope", 2.0}}), Error);
}

TEST_CASE("track json round trip") {
  for (TrainTrack t : {single_loop_track(), two_loops_track(), ungemach_track(), maximal_genus2_track(),
                       one_sided_track()}) {
    Multipliers m;
    m[t.branches[0].id] = 0.5;
    Multipliers back;
    TrainTrack r = track_from_json(to_json(t, m), &back);
    CHECK(r.name == t.name);
    CHECK(r.branches.size() == t.branches.size());
    CHECK(back == m);
    CHECK(to_json(r, back) == to_json(t, m));
  }
}
