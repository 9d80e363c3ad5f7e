#include "cclab/config.hpp"
#include "cclab/io.hpp"

#include "doctest.h"
#include "gen.hpp"

using namespace cclab;
using json = nlohmann::json;

TEST_CASE("representation json round trips") {
  FuchsianRep F = default_fuchsian(2);
  FuchsianRep F2 = fuchsian_from_json(to_json(F));
  for (int k = 0; k < 4; ++k) CHECK((F2.images[k] - F.images[k]).norm() == 0.0);
  json broken = to_json(F);
  broken["generators"][0][0][0] = 3.0;
  CHECK_THROWS_AS(fuchsian_from_json(broken), Error);

  HitchinRep rho = default_hitchin();
  HitchinRep r2 = hitchin_from_json(to_json(rho));
  for (int k = 0; k < 4; ++k) CHECK((r2.images[k] - rho.images[k]).norm() == 0.0);
  CHECK(r2.bulge_s == rho.bulge_s);
  CHECK(to_json(r2)["generators"] == to_json(rho)["generators"]);

  gen::Rng r(111);
  Cocycle phi = coboundary(rho, gen::covec(r));
  CoaffineRep eta = assemble(rho, phi);
  CoaffineRep e2 = coaffine_from_json(to_json(eta));
  for (int k = 0; k < 4; ++k) CHECK((e2.images[k] - eta.images[k]).norm() < 1e-15);

  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,2],[3]]"), 2, 2), Error);
  CHECK(matrix_from_json(matrix_json(Mat3::Identity()), 3, 3) == Mat3::Identity());
}

TEST_CASE("config defaults and overrides") {
  ExperimentConfig d = config_from_json(json::object());
  CHECK(d.L == 8);
  CHECK(d.c1 == "b2");
  CHECK(config_from_json(to_json(d)).seed == d.seed);
  CHECK(to_json(config_from_json(to_json(d))) == to_json(d));

  ExperimentConfig c = config_from_json(json::parse(R"({"sampling": {"L": 6}, "bending": {"t": 0.25}})"));
  CHECK(c.L == 6);
  CHECK(c.t == 0.25);
  CHECK(c.bulge_s == 0.5);
}

TEST_CASE("config rejects bad input") {
  for (const char* text : {R"({"bogus": 1})", R"({"sampling": {"L": "8"}})", R"({"sampling": {"L": 0}})",
                           R"({"bending": {"shape": 1}})", R"({"track": {"multipliers": {"e": -1}}})",
                           R"({"representation": {"model": "explicit"}})", R"({"aiet": {"orbit_start": 2.5}})"}) {
    CAPTURE(text);
    try {
      config_from_json(json::parse(text));
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadInput);
    }
  }
}

TEST_CASE("building representations from a config") {
  ExperimentConfig c;
  HitchinRep rho = make_representation(c);
  CHECK((rho.images[3] - default_hitchin().images[3]).norm() < 1e-14);

  c.bulge_s = 0;
  c.handle_s = 0;
  HitchinRep f = make_representation(c);
  CHECK(f.provenance == "fuchsian");
  CHECK(middle_eigen_data(f, parse_word("a1 b2")).l2 == doctest::Approx(1).epsilon(1e-10));

  c.genus = 3;
  try {
    make_representation(c);
    FAIL("genus 3 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }

  ExperimentConfig e;
  e.model = "explicit";
  e.fuchsian_json = to_json(default_fuchsian(2));
  e.bulge_s = 0;
  e.handle_s = 0;
  HitchinRep ex = make_representation(e);
  CHECK(relator_residual(ex) < 1e-8);
  CHECK((ex.images[0] - sym_square(default_fuchsian(2)).images[0]).norm() < 1e-14);

  ExperimentConfig h;
  h.focus_power = 2;
  HullOptions o = make_hull_options(h);
  REQUIRE(o.focus.size() == 1);
  CHECK(to_string(o.focus[0]) == "b2");
}

TEST_CASE("track presets") {
  for (const char* n : {"single_loop", "two_loops", "ungemach", "maximal_genus2", "one_sided"}) CHECK(track_preset(n));
  CHECK_FALSE(track_preset("octopus"));
}
