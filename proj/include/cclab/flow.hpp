#pragma once

#include "cclab/hitchin.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cclab {

// A fiber norm |x|^2 = x^T Q x.
struct NormChoice {
  Mat3 Q = Mat3::Identity();
  double operator()(const Vec3& x) const;
};
// Q = A A^T + 0.1 I for a seeded Gaussian A.
NormChoice random_norm(unsigned seed);

// Word trajectories are read from the right: after k letters the holonomy is
// rho(s_{n-k+1} ... s_n), so a closed word w advances by rho(w) per period.
struct GrowthTrace {
  std::vector<double> t;     // word-length time
  std::vector<double> logG;  // logG[0] = 0
  Word word;
  std::string label;
};

// log G at times k l(w), k = 0..n (n < 0 runs backwards, through rho(w)^-1), for the
// E2 component of x; x defaults to the middle eigenvector of rho(w).
GrowthTrace g_along_closed(const HitchinRep& rho, const Word& w, int n, const NormChoice& norm = {},
                           const std::optional<Vec3>& x = std::nullopt);
// Per-letter trace of an arbitrary vector along an arbitrary word (no projection).
GrowthTrace g_along_word(const HitchinRep& rho, const Word& w, const Vec3& x, const NormChoice& norm = {});

struct LambdaPair {
  double plus = 0, minus = 0;
};
// Max and min secant slope over consecutive samples in the tail half (>= 10 windows).
LambdaPair lambda_estimates(const GrowthTrace& trace);

struct Verdict {
  bool bendable = false;
  double forward_slope = 0;   // per unit word length
  double backward_slope = 0;
  std::string note;
};
Verdict criterion_check(const HitchinRep& rho, const Word& closed_leaf);
// The two ends of m follow c1 and c2 in their negative directions.
Verdict criterion_check(const HitchinRep& rho, const SpiralConfig& spiral);

struct Atom {
  int side = 1;      // 1: crossings near c1, 2: near c2
  int crossing = 0;  // j-th crossing of the transversal
  double weight = 0;
};
struct AtomicEquivariantMeasure {
  std::vector<Atom> atoms;  // the first crossings on each side, explicitly
  double side_mass[2] = {0, 0};  // closed forms w0/(1 - L_i^-1)
  double total_mass = 0;
  double recursion_residual = 0;
};
AtomicEquivariantMeasure atomic_measure_from_spiral(const HitchinRep& rho, const SpiralConfig& spiral,
                                                    double first_weight = 1.0, int crossings = 40);

void write_csv(std::ostream& os, const GrowthTrace& trace);

}  // namespace cclab
