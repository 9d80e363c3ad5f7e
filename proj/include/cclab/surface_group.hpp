#pragma once

#include "cclab/core.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cclab {

// Letters are +-(k+1) for generator k; generator order a1,b1,...,ag,bg.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> l) : letters(std::move(l)) {}
  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator<(const Word& o) const { return letters < o.letters; }
};

Word reduce(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);  // reduced
Word power(const Word& w, int n);
Word cyclic_reduce(const Word& w);
bool is_cyclically_reduced(const Word& w);
Word commutator(const Word& u, const Word& v);

std::string generator_name(int index);  // 0 -> "a1", 1 -> "b1", ...
std::string to_string(const Word& w);   // "a1 B1 a2" (capital = inverse)
Word parse_word(const std::string& s, int genus = 2);

struct Presentation {
  int genus = 2;
  int generator_count() const { return 2 * genus; }
  Word relator() const;  // [a1,b1]...[ag,bg]
};

// No subword longer than half a relator (cyclic permutations of R and R^-1): such words
// are geodesic in the surface group.
bool dehn_reduced(const Word& w, int genus);

// All freely reduced words of length exactly n (n >= 1) over 2g generators.
std::vector<Word> reduced_words(int genus, int n);

template <class M>
M evaluate(const std::vector<M>& images, const std::vector<M>& inverses, const Word& w) {
  M out = M::Identity(images.front().rows(), images.front().cols());
  for (int l : w.letters) {
    int k = std::abs(l) - 1;
    if (k < 0 || k >= static_cast<int>(images.size()))
      throw Error(ErrorCode::UnknownGenerator, "letter outside the generator table");
    out = out * (l > 0 ? images[k] : inverses[k]);
  }
  return out;
}

struct BoundaryPoint {
  double angle = 0.0;  // in [0, 2pi) on the unit circle of the disk model
};

double normalize_angle(double a);
// The boundary circle is P^1(R): a unit vector v=(cos th, sin th) sits at angle -2 th.
Eigen::Vector2d boundary_vector(const BoundaryPoint& p);
BoundaryPoint boundary_point(const Eigen::Vector2d& v);
BoundaryPoint mobius(const Mat2& A, const BoundaryPoint& p);
double angular_distance(const BoundaryPoint& a, const BoundaryPoint& b);
using Chord = std::pair<BoundaryPoint, BoundaryPoint>;
// Chords cross strictly; shared endpoints (within eps) do not count.
bool linked(const Chord& a, const Chord& b, double eps = 1e-12);
bool shares_endpoint(const Chord& a, const Chord& b, double eps = 1e-12);

struct FuchsianRep {
  int genus = 2;
  std::vector<Mat2> images;
  std::vector<Mat2> inverses;
  std::string model;  // "regular-octagon" or "explicit"

  Mat2 operator()(const Word& w) const { return evaluate(images, inverses, w); }
};

FuchsianRep default_fuchsian(int genus);
FuchsianRep fuchsian_from_images(int genus, const std::vector<Mat2>& images, const std::string& model);
double relator_residual(const FuchsianRep& rep);  // ||rho(R) -+ I||, min over sign

// Attracting then repelling fixed point.
Chord axis_endpoints(const FuchsianRep& rep, const Word& w);
Chord axis_endpoints(const Mat2& A);

enum class TorusSide { T1, T2, Mixed };
TorusSide torus_side(const Presentation& p, const Word& w);
const char* to_string(TorusSide s);

// Klein model in symmetric-square coordinates: X(v) = (v1^2, v1 v2, v2^2).
Vec3 klein_boundary(const BoundaryPoint& p);
Vec3 klein_basepoint();  // the octagon centre, (1,0,1)
Mat3 sym2_matrix(const Mat2& A);

// The geodesic with the given endpoints strictly separates P and Q in the Klein disk.
bool separates(const Chord& leaf, const Vec3& P, const Vec3& Q);

// Isolated leaf m from the repelling point of c1 to the repelling point of
// connector*c2*connector^-1: both ends follow the c_i in their negative direction.
struct SpiralConfig {
  Word c1;
  Word c2;
  Word connector;
};

Chord spiral_leaf(const FuchsianRep& rep, const SpiralConfig& s);

// Group elements of word length <= r, deduplicated by image in PSL(2).
std::vector<Word> group_ball(const FuchsianRep& rep, int r);

// Ball checks: no lift of u crosses a lift of v (or of itself).
bool curves_disjoint(const FuchsianRep& rep, const Word& u, const Word& v, int ball_radius);
bool curve_simple(const FuchsianRep& rep, const Word& u, int ball_radius);
// No translate of m crosses m or a lift of c1, c2.
bool spiral_simple(const FuchsianRep& rep, const SpiralConfig& s, int ball_radius);

}  // namespace cclab
