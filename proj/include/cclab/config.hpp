#pragma once

#include "cclab/bending.hpp"
#include "cclab/hull.hpp"
#include "cclab/traintrack.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace cclab {

// One experiment. Every field has a default; a config file only lists what it changes.
struct ExperimentConfig {
  unsigned seed = 20261014;
  std::string output_dir = "cclab-out";

  // representation
  std::string model = "regular-octagon";  // or "explicit" with fuchsian_json
  int genus = 2;
  double bulge_s = 0.5;   // separating curve [a1, b1]
  double handle_s = 0.5;  // nonseparating curve a2
  nlohmann::json fuchsian_json;

  // bending
  std::string c1 = "b2", c2 = "b2", connector = "a2";
  double t = 1.0;
  double eps_sum = 1e-12;

  // sampling
  int L = 8;
  std::size_t N_cap = 400000;
  int focus_power = 0;  // hull refinement near the attracting end of c1

  // tracks and interval exchanges
  std::string track = "ungemach";  // preset name or a path to a track JSON
  nlohmann::json multipliers = nlohmann::json::object();
  int orbit_steps = 200;
  double orbit_start = 0.1;

  Tolerance tolerance;
};

// Throws BadInput on unknown keys, wrong types, or out-of-range values.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

// Unsupported for genus != 2 with the built-in model.
HitchinRep make_representation(const ExperimentConfig& c);
BendingInput make_bending_input(const ExperimentConfig& c);
HullOptions make_hull_options(const ExperimentConfig& c);

// Presets: single_loop, two_loops, ungemach, maximal_genus2, one_sided.
std::optional<TrainTrack> track_preset(const std::string& name);

}  // namespace cclab
