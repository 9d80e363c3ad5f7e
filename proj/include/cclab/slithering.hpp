#pragma once

#include "cclab/hitchin.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <vector>

namespace cclab {

// Flags at the two ends of an oriented leaf.
struct LeafFlags {
  Flag minus, plus;
  std::string id;
};

LeafFlags reversed(const LeafFlags& g);
LeafFlags act(const Mat3& A, const LeafFlags& g);  // A.F: points by A, lines by A^-1
// The axis of w, oriented from its repelling to its attracting point.
LeafFlags axis_flags(const HitchinRep& rho, const Word& w);
// g.m for the isolated spiral leaf; g defaults to the identity.
LeafFlags spiral_leaf_flags(const HitchinRep& rho, const SpiralConfig& s, const Word& g = Word());

// Which ends coincide: first letter for g, second for h.
enum class SharedEnd { MinusMinus, PlusPlus, MinusPlus, PlusMinus };
SharedEnd find_shared(const LeafFlags& g, const LeafFlags& h, double eps = 1e-9);
bool same_flag(const Flag& a, const Flag& b, double eps);

struct SlitheringMap {
  Mat3 M = Mat3::Identity();
  std::string source, target;
};

// The unipotent map fixing the shared flag and taking the other end of g to the other end of h.
SlitheringMap elementary_slither(const LeafFlags& g, const LeafFlags& h, SharedEnd shared);
SlitheringMap elementary_slither(const LeafFlags& g, const LeafFlags& h);

// Product of elementary maps along consecutive asymptotic leaves, from front to back.
SlitheringMap chain_slither(const std::vector<LeafFlags>& chain);

struct SpiralChain {
  SlitheringMap total;              // from g0 to the limit leaf
  std::vector<double> factor_norms;  // |M_k - I|
  double decay_ratio = 0;            // monitored ratio of successive factor norms
  double tail_estimate = 0;          // bound on |total - limit|
  int steps = 0;
};
// Leaves g_k = rho(c)^k.g0 all share one endpoint fixed by rho(c); the product of the
// factors from g_k to g_{k+1} converges when their norms decay geometrically.
SpiralChain spiral_slither(const LeafFlags& g0, const Mat3& C, const Mat3& Cinv, double eps = 1e-13,
                           int max_steps = 400);

double triple_ratio(const Flag& a, const Flag& b, const Flag& c);

struct TriangleHolonomy {
  Mat3 composite;  // Sigma_xy Sigma_yz Sigma_zx
  double triple_ratio = 0;
  double square_distance = 0;  // |composite^2 - I|
};
TriangleHolonomy triangle_holonomy(const LeafFlags& x, const LeafFlags& y, const LeafFlags& z);
// Triangle with vertices at three boundary points given by attracting fixed points of words.
TriangleHolonomy triangle_holonomy(const HitchinRep& rho, const Word& u, const Word& v, const Word& w);

// A loop of the track graph realized in the universal cover: slither along the chain from
// its first leaf to its last leaf, which must equal gamma.(first leaf).
struct TrackLoop {
  std::string id;
  Word gamma;
  std::vector<LeafFlags> chain;
};
// Middle line of a leaf: the intersection of the planes of its two flags.
Vec3 middle_line(const LeafFlags& g);

struct HolonomyCharacter {
  std::map<std::string, double> values;
};
// chi = s where (transport) v = s rho(gamma) v for v on the middle line of the first leaf.
double loop_character(const HitchinRep& rho, const TrackLoop& loop);
HolonomyCharacter slither_character(const HitchinRep& rho, const std::vector<TrackLoop>& loops);
// The loop around the closed leaf c (a single leaf, gamma = c).
TrackLoop closed_leaf_loop(const HitchinRep& rho, const Word& c, const std::string& id);
// Loops around c1 and c2 carried by the spiral's track.
std::vector<TrackLoop> spiral_track_loops(const HitchinRep& rho, const SpiralConfig& s);

nlohmann::json to_json(const HolonomyCharacter& chi);

}  // namespace cclab
