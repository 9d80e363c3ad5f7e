#pragma once

#include "cclab/coaffine.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cclab {

struct HalfBranch {
  int branch = 0;
  bool at_to = false;  // the end at the branch's `to` switch
};

struct Branch {
  std::string id;
  int from = 0, to = 0;  // switch indices
  bool flip = false;     // crossing the branch reverses the in/out orientation
};

struct Switch {
  std::string id;
  std::vector<HalfBranch> in, out;
};

struct TrainTrack {
  std::vector<Branch> branches;
  std::vector<Switch> switches;
  std::string name;

  int branch_index(const std::string& id) const;
  int switch_index(const std::string& id) const;
};

// Checks incidences and recomputes the flip flags from the switch sides.
void validate(TrainTrack& t);
bool orientable(const TrainTrack& t);
int component_count(const TrainTrack& t);

using Multipliers = std::map<std::string, double>;  // missing branches have m = 1

struct WeightSpace {
  int dimension = 0;
  std::vector<VecX> basis;  // start weights per branch
  RankReport rank;
};
WeightSpace weight_space(const TrainTrack& t);

// Rows: switches; columns: branches. Half-branch weight is w(b) at the from-end, m(b) w(b) at the to-end.
MatX switch_matrix(const TrainTrack& t, const Multipliers& m);

struct AffineWeights {
  std::vector<double> w_start;
  std::vector<double> m;
  double margin = 0;  // min start weight at total mass 1
  double total_mass = 1;
  std::vector<std::string> log;

  double w_end(int b) const { return m[b] * w_start[b]; }
  double residual(const TrainTrack& t) const;  // max |switch condition|
};

// Margin-maximizing LP over start weights normalized to total mass 1.
std::optional<AffineWeights> affine_feasibility(const TrainTrack& t, const Multipliers& m, double eps = 1e-9);
AffineWeights scaled(const AffineWeights& w, double s);

// Product of m^{+-1} along a closed sequence of branch traversals (+1 forward).
double cycle_multiplier(const TrainTrack& t, const Multipliers& m, const std::vector<std::pair<int, int>>& cycle);

// Double cover: switches (s,+), (s,-); sheet - swaps in and out; a flipped branch changes sheet.
TrainTrack orientation_cover(const TrainTrack& t);

// Split branch id into id.a (multiplier m1) and id.b (multiplier m/m1) at a new switch.
TrainTrack subdivide(const TrainTrack& t, const std::string& id);
Multipliers subdivide(const Multipliers& m, const std::string& id, double m1);

TrainTrack single_loop_track();
TrainTrack two_loops_track();
// Loops loop1 (around c1) and loop2 (around c2) joined by the connector e carrying the spiral.
TrainTrack ungemach_track();
// A trivalent track with four trigon complementary regions on the genus-2 surface.
TrainTrack maximal_genus2_track();
// One switch with two loops, each returning to the side it left from.
TrainTrack one_sided_track();

nlohmann::json to_json(const TrainTrack& t, const Multipliers& m = {});
TrainTrack track_from_json(const nlohmann::json& j, Multipliers* m = nullptr);
nlohmann::json to_json(const TrainTrack& t, const AffineWeights& w);

}  // namespace cclab
