#pragma once

#include "cclab/core.hpp"
#include "cclab/surface_group.hpp"

#include <string>
#include <vector>

namespace cclab {

struct HitchinRep {
  int genus = 2;
  std::vector<Mat3> images;
  std::vector<Mat3> inverses;
  std::string provenance = "fuchsian";  // "fuchsian" or "bulged"
  double bulge_s = 0.0;   // separating bulge along [a1,b1]
  double handle_s = 0.0;  // bulge along a2 (b2 -> b2 delta)
  FuchsianRep fuchsian;  // boundary combinatorics for the underlying surface

  Mat3 operator()(const Word& w) const { return evaluate(images, inverses, w); }
};

HitchinRep sym_square(const FuchsianRep& rep);
// Conjugate the a2,b2 images by V exp(s diag(1,-2,1)) V^-1, V the eigenbasis of rho([a1,b1]).
HitchinRep bulge(const HitchinRep& rep, double s);
Mat3 bulge_conjugator(const HitchinRep& rep, double s);
// V exp(s diag(1,-2,1)) V^-1 for V the eigenbasis of rho(w).
Mat3 bulge_conjugator(const HitchinRep& rep, const Word& w, double s);
// Bulge along the nonseparating curve a_h: b_h -> b_h delta with delta centralizing rho(a_h).
// Works on any rep; the relator is preserved because delta commutes with rho(a_h).
HitchinRep handle_bulge(const HitchinRep& rep, int handle, double s);
// The separating bulge alone keeps Lambda_2 = 1 on every simple closed curve in genus 2
// (it commutes with the hyperelliptic involution), so the working default composes it
// with a bulge along a2.
HitchinRep default_hitchin(double s = 0.5, double u = 0.5);
double relator_residual(const HitchinRep& rep);

struct MiddleEigen {
  double l1, l2, l3;
};
MiddleEigen middle_eigen_data(const HitchinRep& rep, const Word& w);
MiddleEigen middle_eigen_data(const Mat3& A);

struct LimitEntry {
  BoundaryPoint point;
  Flag flag;
  Word word;
};
struct LimitSample {
  std::vector<LimitEntry> entries;  // sorted by boundary angle
  int word_length_bound = 0;
};

LimitSample sample_limit_curve(const HitchinRep& rep, int L);
// Smallest pairwise transversality over distinct sampled flags.
double min_transversality(const LimitSample& s);

// First mixed cyclically reduced word (length <= max_len, lexicographic within length)
// whose middle eigenvalue differs from 1 by more than gap.
Word first_middle_gap_word(const HitchinRep& rep, int max_len, double gap);

// A covector positive on the closure of the divided domain, found from a limit-curve sample:
// points are lifted continuously along the boundary circle and kappa is the sum of the
// sampled tangent lines, each signed to be positive on the centroid.
struct ConeChart {
  Covec3 kappa;
  Vec3 interior;  // centroid of the lifted sample, kappa(interior) > 0
  double margin = 0;  // min kappa(x)/(|kappa||x|) over the sample
};
ConeChart cone_chart(const HitchinRep& rep, int L = 4);
// Representative of a projective point with kappa > 0.
Vec3 cone_lift(const ConeChart& chart, const Vec3& x);

struct LoxodromyReport {
  bool ok = true;
  int words_checked = 0;
  double min_gap_ratio = 0;  // min over words of min(l1/l2, l2/l3)
  std::string failure;
};
LoxodromyReport loxodromy_certificate(const HitchinRep& rep, int max_len);

}  // namespace cclab
