#pragma once

#include "cclab/traintrack.hpp"

#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace cclab {

// One affine branch x -> image_left + slope (x - left) on [left, left + length), or from the
// right end of the image when slope < 0.
struct AietPiece {
  double left = 0, length = 0, slope = 1, image_left = 0;
  std::string label;
  int branch = -1;    // track branch, -1 for hand-built pieces
  bool forward = true;  // traversed from its from-end
  int sheet = 0, target_sheet = 0;

  bool flip() const { return slope < 0; }
  double image_length() const { return std::abs(slope) * length; }
  double operator()(double x) const;
};

struct AIET {
  std::vector<AietPiece> pieces;  // sorted by left endpoint, tiling [0, 2)

  int piece_at(double r, double eps = 1e-13) const;  // -1 within eps of a cut or outside [0, 2)
  double operator()(double r) const;
  double mass_transport() const;  // sum |slope| length
};

// Validates a hand-built map: lengths positive, domain tiled, images inside [0, 2].
AIET make_aiet(std::vector<AietPiece> pieces);

double involution(double r);  // r -> 1 + r mod 2

// Ties at every switch, stacked in switch order on sheet + ([0,1)) and again on sheet - ([1,2)).
// On each tie the out half-branches and the in half-branches are stacked in list order; sheet -
// exchanges the roles of in and out. A half-branch on the out side of a sheet maps along its
// branch to the in side where the other end arrives; the slope is m(b) going from the from-end
// to the to-end, 1/m(b) the other way, negated when the sheet changes.
AIET aiet_from_track(const TrainTrack& t, const AffineWeights& w);

// max |slope - m(b)^{+-1}| over pieces built from a track.
double slope_holonomy_residual(const AIET& T, const TrainTrack& t, const Multipliers& m);

struct Orbit {
  std::vector<double> points;
  bool truncated = false;  // hit a cut before n steps
};
Orbit iterate(const AIET& T, double r, int n);

struct InvolutionReport {
  bool pass = false;
  double residual = 0;  // max |inv S inv S (r) - r|
  int tested = 0, skipped = 0;
  std::string worst_label;  // piece containing the worst grid point
};
// The sheet-exchanged dynamics runs the flow backwards: inv S inv = S^-1.
InvolutionReport involution_check(const AIET& T, int grid = 10000, double tol = 1e-9);

struct TilingReport {
  double overlap = 0;  // total image length minus measure of the union
  double gap = 0;      // 2 minus measure of the union
  double mc_uncovered = 0;  // Monte-Carlo fraction of [0,2) outside every image
};
TilingReport tiling_check(const AIET& T, std::mt19937_64& rng, int samples = 20000);

void write_csv(std::ostream& os, const Orbit& orbit);
void write_csv(std::ostream& os, const AIET& T);
// Graph of the map on [0,2]^2.
std::string aiet_svg(const AIET& T, const std::vector<Orbit>& orbits = {});

nlohmann::json to_json(const AIET& T);

}  // namespace cclab
