#include "cclab/aiet.hpp"

#include "doctest.h"
#include "gen.hpp"

#include <sstream>

using namespace cclab;

namespace {
AIET from_preset(const TrainTrack& t, const Multipliers& m = {}) {
  auto w = affine_feasibility(t, m);
  REQUIRE(w.has_value());
  return aiet_from_track(t, *w);
}
}  // namespace

TEST_CASE("interval exchanges from every preset") {
  std::mt19937_64 rng(91);
  std::vector<std::pair<TrainTrack, Multipliers>> cases = {{single_loop_track(), {}},
                                                           {two_loops_track(), {}},
                                                           {ungemach_track(), {{"loop1", 0.66}, {"loop2", 0.5}}},
                                                           {maximal_genus2_track(), {}},
                                                           {one_sided_track(), {}}};
  for (const auto& [t, m] : cases) {
    AIET T = from_preset(t, m);
    CAPTURE(t.name);
    CHECK(slope_holonomy_residual(T, t, m) < 1e-12);
    CHECK(T.mass_transport() == doctest::Approx(2).epsilon(1e-10));
    InvolutionReport ir = involution_check(T);
    CHECK(ir.pass);
    TilingReport tr = tiling_check(T, rng);
    CHECK(std::abs(tr.overlap) < 1e-9);
    CHECK(tr.gap < 1e-9);
    double cover = 0;
    for (const AietPiece& p : T.pieces) cover += p.length;
    CHECK(cover == doctest::Approx(2));
  }
}

TEST_CASE("Ungemach slopes are the loop multipliers") {
  Multipliers m{{"loop1", 0.66}, {"loop2", 0.5}};
  AIET T = from_preset(ungemach_track(), m);
  bool saw1 = false, saw2 = false;
  for (const AietPiece& p : T.pieces) {
    saw1 = saw1 || std::abs(std::abs(p.slope) - 0.66) < 1e-12;
    saw2 = saw2 || std::abs(std::abs(p.slope) - 0.5) < 1e-12;
  }
  CHECK(saw1);
  CHECK(saw2);
}

TEST_CASE("untwisted single loop is a rotation") {
  AIET T = from_preset(single_loop_track());
  for (const AietPiece& p : T.pieces) CHECK(std::abs(p.slope) == doctest::Approx(1));
  CHECK(involution(0.25) == doctest::Approx(1.25));
  CHECK(involution(1.5) == doctest::Approx(0.5));
}

TEST_CASE("slope one exchanges preserve length") {
  AIET T = from_preset(two_loops_track());
  std::mt19937_64 rng(92);
  std::uniform_real_distribution<double> u(0, 2);
  for (int trial = 0; trial < 5; ++trial) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    int in = 0, n = 40000;
    for (int i = 0; i < n; ++i) {
      double y = T(u(rng));
      if (y >= a && y < b) ++in;
    }
    CHECK(std::abs(2.0 * in / n - (b - a)) < 2e-2);
  }
}

TEST_CASE("orbits of hand-built maps") {
  AIET id = make_aiet({{0, 2, 1, 0, "id"}});
  Orbit o = iterate(id, 0.7, 10);
  REQUIRE(o.points.size() == 11);
  for (double x : o.points) CHECK(x == 0.7);

  AIET half = make_aiet({{0, 2, 0.5, 0.5, "contract"}});
  Orbit c = iterate(half, 0.1, 30);
  CHECK_FALSE(c.truncated);
  for (std::size_t k = 1; k < c.points.size(); ++k)
    CHECK(std::abs(c.points[k] - 1) == doctest::Approx(0.5 * std::abs(c.points[k - 1] - 1)).epsilon(1e-9));

  CHECK_THROWS_AS(make_aiet({{0, 1, 1, 0, "short"}}), Error);
  CHECK_THROWS_AS(make_aiet({{0, 2, 2, 0, "spill"}}), Error);
}

TEST_CASE("broken sheet symmetry is located") {
  AIET T = from_preset(ungemach_track(), {{"loop1", 0.66}, {"loop2", 0.5}});
  int k = 0;
  while (T.pieces[k].left + T.pieces[k].length > 1.0) ++k;
  T.pieces[k].slope *= 1.01;
  InvolutionReport ir = involution_check(T);
  CHECK_FALSE(ir.pass);
  CHECK(ir.residual > 1e-9);
  CHECK_FALSE(ir.worst_label.empty());
}

TEST_CASE("aiet outputs") {
  AIET T = from_preset(ungemach_track(), {{"loop1", 0.66}, {"loop2", 0.5}});
  std::ostringstream a, b;
  write_csv(a, T);
  write_csv(b, iterate(T, 0.1, 20));
  std::string rows = a.str();
  CHECK(std::count(rows.begin(), rows.end(), '\n') == static_cast<long>(T.pieces.size()) + 1);
  CHECK(aiet_svg(T).find("<svg") != std::string::npos);
  CHECK(to_json(T)["pieces"].size() == T.pieces.size());
  CHECK(aiet_svg(T) == aiet_svg(T));
}
