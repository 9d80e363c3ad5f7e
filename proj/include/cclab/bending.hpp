#pragma once

#include "cclab/coaffine.hpp"

#include <string>
#include <vector>

namespace cclab {

// b2 with connector a2: the leaf leaves b2 on one side and returns on the other.
SpiralConfig default_spiral();
// Time reversal of both closed leaves; the tails then run against the orientation.
SpiralConfig reversed(const SpiralConfig& s);

struct BendingInput {
  HitchinRep rho;
  SpiralConfig spiral;
  double t = 1.0;
  double eps_sum = 1e-12;  // target for the certified truncation bound
  int min_radius = 3;      // group-ball radius for lift enumeration
  int max_radius = 6;      // EnumerationOverflow beyond this
  int walk = 14;           // powers c^n, |n| <= walk, scanned per ball element
};

struct RegionSum {
  Translation B;            // truncated sum over n = 1..N
  Covec3 closed_form;       // b1 L1^-1/(1-L1^-1), b2 L2^-1/(1-L2^-1) in the eigenbasis
  int n_terms = 0;
  double bound = 0;         // certified bound on |closed_form - B|
};

// sum_{n=1}^N rho(c)^n.tau for tau vanishing on the repelling eigenvector of rho(c).
RegionSum geometric_tail_sum(const EigenBasis3& c, const Covec3& tau, int N);
// sum_{n >= N0} rho(c)^n.tau in closed form.
Covec3 tail_closed_form(const EigenBasis3& c, const Covec3& tau, int N0);
// Constant C of the certified bound C L2^-N/(1-L2^-1).
double tail_constant(const EigenBasis3& c, const Covec3& tau);

// One summand of a region sum: an explicit lift g.m or a closed-form tail accumulating
// on a lift of c1 or c2.
struct LeafTerm {
  Chord chord;          // Fuchsian endpoints (first term of a tail)
  Covec3 covector;      // signed, positive away from the base region, t = 1
  int family = 0;       // 1: u c1^n m, 2: u c2^n k^-1 m
  bool tail = false;
  int first_n = 0;      // tails start here
  double weight = 1.0;  // |covector| / |leaf covector| for an explicit leaf
};

struct GeneratorSum {
  Covec3 b = Covec3::Zero();  // at t = 1
  std::vector<LeafTerm> terms;
  double tail_bound = 0;      // size of the closed-form part
};

struct BendingResult {
  CoaffineRep eta;
  Cocycle phi;                     // phi_t, extracted from eta_t
  std::vector<GeneratorSum> sums;  // per generator, at t = 1
  Vec3 base_point;                 // interior point of the base region in the divided domain
  Covec3 leaf_covector;            // alpha_m
  int radius_used = 0;
  double relator_residual = 0;
};


BendingResult bend_representation(const BendingInput& in);
// Sum over lifts of m separating the base region from the region of g, at t = 1.
GeneratorSum separating_sum(const BendingInput& in, const Word& g);

// diag(s^a I3, s^b): conjugation scales every translation part by s^(b-a).
Mat4 scaling_conjugator(double s, double a, double b);
CoaffineRep conjugate(const CoaffineRep& eta, const Mat4& D);

struct AnosovReport {
  bool pass = true;
  std::vector<double> min_log_gap;  // per word length, over geodesic words: min log(sigma1/sigma2)
  double slope = 0;                 // least-squares growth rate of min_log_gap
  double e4_margin = 0;             // min projective distance of limit points from [e4]
  std::string note;
};
AnosovReport anosov_certificate(const CoaffineRep& eta, int L);

}  // namespace cclab
