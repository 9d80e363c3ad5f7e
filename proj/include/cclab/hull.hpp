#pragma once

#include "cclab/bending.hpp"
#include "cclab/flow.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace cclab {

// Sign of det[b-a, c-a, d-a]: a static floating-point filter, exact rational arithmetic
// when the filter cannot decide.
int orient3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
             const Eigen::Vector3d& d);
long long exact_orient_calls();  // process-wide count of filter failures

struct Facet {
  std::array<int, 3> v{};   // vertex indices, counterclockwise seen from outside
  std::array<int, 3> nb{};  // neighbour across edge (v[i], v[i+1])
  bool upper = false;       // outward normal points up the height axis
  Covec3 alpha = Covec3::Zero();  // support plane (alpha, 1): alpha(x) + z = 0
  double cond = 1;  // condition number of the vertex lifts; scales tolerances
};

// Convex hull of points in R^3: facets are triangles over the (exact-sign) convex hull.
struct Polytope {
  std::vector<Facet> facets;
  std::vector<int> vertices;  // indices of hull vertices
  bool flat = false;          // all points coplanar
};
Polytope convex_hull(const std::vector<Eigen::Vector3d>& pts);

// The affine chart: kappa is a covector positive on the divided domain of the linear part,
// extended by kappa(e4) = 0, so the projection from [e4] is vertical. Chart coordinates are
// (u, v) in ker kappa through x / kappa(x), and the height h = z / kappa(x).
struct HullChart {
  Covec3 kappa;
  Eigen::Matrix<double, 2, 3> uv;  // orthonormal rows spanning ker kappa
  double margin = 0;                // min kappa(x) / |x| over the sample
  Eigen::Vector2d project(const Vec3& x) const;
};

struct HullSample {
  Vec4 lift;  // kappa(x) = 1
  Eigen::Vector3d chart;  // (u, v, h)
  double angle = 0;  // Fuchsian boundary angle of the attracting point
  Word word;
};

struct HullComplex {
  HullChart chart;
  std::vector<HullSample> samples;
  Polytope hull;
  int depth = 0;
  bool flat = false;
  double flat_residual = 0;  // max distance of samples from their best plane
  Covec3 flat_alpha = Covec3::Zero();  // the common plane of a flat hull
  double extent = 0;  // diameter of the projected sample
  double height_scale = 0;  // max |h|
  int upper_count = 0, lower_count = 0;
};

struct HullOptions {
  int L = 8;
  std::size_t N_cap = 400000;  // sample cap; words are taken shortest first
  double resolution_base = 3.0;  // boundary resolution 2 pi base^-L prunes the word tree
  double dedupe = 1e-12;       // boundary angle resolution
  double chart_margin = 1e-6;  // ChartDegenerate below this
  std::vector<Word> focus;     // extra samples eta(w)^k x, k = 1..focus_power
  int focus_power = 0;
};

// Attracting fixed points of eta(w) for reduced words of length <= L, pruned to the
// boundary resolution of depth L.
HullComplex build_hull(const CoaffineRep& eta, const HullOptions& opt = {});

// The upper facet whose projection contains q. Lookups at seven points (q and a small
// hexagon around it) must agree on the plane; otherwise FacetLookupFailed.
struct FacetLookup {
  int facet = -1;
  Covec3 alpha = Covec3::Zero();
  double spread = 0;  // max plane disagreement in the neighbourhood
  int cluster_size = 1;  // facets sharing the plane, refitted together
};
FacetLookup facet_over(const HullComplex& H, const Vec3& x, bool upper = true, double radius = 1e-4,
                       double agree = 1e-7);
FacetLookup facet_over_point(const HullComplex& H, const Vec3& x, bool upper = true);  // no stability test

struct ConvexityReport {
  bool support_ok = true;   // every upper plane lies above every hull vertex
  double support_violation = 0;  // worst value in units of the conditioned tolerance times eps
  bool differences_ok = true;  // alpha(P2) - alpha(P1) >= 0 on P2, <= 0 on P1
  double difference_violation = 0;
  long long pairs_checked = 0;
  bool max_abs_difference_zero = false;  // flat hull: all planes agree
  double max_abs_difference = 0;
};
ConvexityReport convexity_check(const HullComplex& H, std::mt19937_64& rng, long long pair_budget = 2000000,
                                double eps = 1e-9);

struct BendingCocycleSample {
  Cocycle psi;
  int base_facet = -1;
  Covec3 base_alpha = Covec3::Zero();
  double lookup_spread = 0;
};
// psi(g) = alpha(facet over rho(g).p) - alpha(facet over p) on each generator.
BendingCocycleSample bending_cocycle_from_hull(const HullComplex& H, const HitchinRep& rho, const Vec3& p,
                                               bool upper = true);

struct CohomologousReport {
  double residual = 0;  // least-squares fit of psi - phi by a coboundary
  double relative = 0;  // residual / |phi|
  double direct = 0;    // |psi - phi| / |phi| (base plane at alpha = 0)
};
CohomologousReport compare_cocycles(const HitchinRep& rho, const Cocycle& psi, const Cocycle& phi);

// Planes on the two sides of translates g.m of the isolated leaf (g in a ball of the given
// radius): the projectivized difference against [leaf covector].
struct LocalizationReport {
  int leaves = 0;
  double max_distance = 0;
  double median_distance = 0;
  std::vector<double> distances;
};
LocalizationReport localization(const HullComplex& H, const BendingInput& in, int ball_radius = 2,
                                double offset = 1e-3);

// Chart transversal across the fan of strands c1^j m, j = first..first+count-1, perpendicular
// to the axis of c1 at its midpoint.
struct MeasureCheck {
  Covec3 hull_value = Covec3::Zero();    // psi along the transversal
  Covec3 leaf_sum = Covec3::Zero();      // t * sum of exact leaf covectors
  Covec3 atomic_sum = Covec3::Zero();    // sum weight_j * unit middle covector
  double rel_error_atomic = 0;           // |hull - atomic| / |atomic|
  double rel_error_leaves = 0;           // |hull - leaf sum| / |leaf sum|
  int strands = 0;
  int crossings = 0;  // translates of m met by the transversal, |g| <= 5
  std::vector<Covec3> partials;          // psi over each single step
};
// Weight normalization for the measure: the atom at crossing j has weight w0 L^-j with
// w0 = t |beta_2| |r_2|, beta_2 the middle coordinate of the leaf covector in the left
// eigenbasis r of rho(c1).
double strand_weight_scale(const BendingInput& in, const BendingResult& bent);
MeasureCheck measure_vs_cocycle_check(const HullComplex& H, const BendingInput& in, const BendingResult& bent,
                                      const AtomicEquivariantMeasure& mu, int first, int count,
                                      bool reversed = false);

void write_off(std::ostream& os, const HullComplex& H);
nlohmann::json to_json(const HullComplex& H);
// Upper-disk facets projected by [Q], coloured by support plane.
std::string hull_svg(const HullComplex& H);

}  // namespace cclab
