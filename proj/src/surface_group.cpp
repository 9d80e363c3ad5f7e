#include "cclab/surface_group.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace cclab {

Word reduce(const Word& w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (int l : w.letters) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word(out);
}

Word inverse(const Word& w) {
  std::vector<int> out(w.letters.rbegin(), w.letters.rend());
  for (int& l : out) l = -l;
  return Word(out);
}

Word concat(const Word& u, const Word& v) {
  std::vector<int> l = u.letters;
  l.insert(l.end(), v.letters.begin(), v.letters.end());
  return reduce(Word(l));
}

Word power(const Word& w, int n) {
  Word base = n >= 0 ? w : inverse(w);
  Word out;
  for (int i = 0; i < std::abs(n); ++i) out = concat(out, base);
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r.letters[i] == -r.letters[j - 1]) {
    ++i;
    --j;
  }
  return Word(std::vector<int>(r.letters.begin() + i, r.letters.begin() + j));
}

bool is_cyclically_reduced(const Word& w) {
  if (!(reduce(w) == w)) return false;
  return w.size() < 2 || w.letters.front() != -w.letters.back();
}

Word commutator(const Word& u, const Word& v) {
  return concat(concat(u, v), concat(inverse(u), inverse(v)));
}

std::string generator_name(int index) {
  return std::string(index % 2 == 0 ? "a" : "b") + std::to_string(index / 2 + 1);
}

std::string to_string(const Word& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int l = w.letters[i];
    std::string n = generator_name(std::abs(l) - 1);
    if (l < 0) n[0] = static_cast<char>(std::toupper(n[0]));
    os << (i ? " " : "") << n;
  }
  return os.str();
}

Word parse_word(const std::string& s, int genus) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++i;
      continue;
    }
    if (c != 'a' && c != 'b' && c != 'A' && c != 'B')
      throw Error(ErrorCode::UnknownGenerator, "cannot parse word '" + s + "'");
    bool inv = std::isupper(static_cast<unsigned char>(c));
    ++i;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw Error(ErrorCode::UnknownGenerator, "missing generator index in '" + s + "'");
    int k = std::stoi(s.substr(i, j - i));
    i = j;
    if (s.compare(i, 3, "^-1") == 0) {
      inv = !inv;
      i += 3;
    }
    if (k < 1 || k > genus) throw Error(ErrorCode::UnknownGenerator, "generator index out of range");
    int idx = 2 * (k - 1) + (std::tolower(c) == 'b' ? 1 : 0);
    out.push_back(inv ? -(idx + 1) : idx + 1);
  }
  return reduce(Word(out));
}

bool dehn_reduced(const Word& w, int genus) {
  const Word R = Presentation{genus}.relator();
  const int r = static_cast<int>(R.size());
  const int half = r / 2;
  const int n = static_cast<int>(w.size());
  for (const Word& rel : {R, inverse(R)}) {
    for (int start = 0; start < r; ++start) {
      for (int i = 0; i + half < n; ++i) {
        int k = 0;
        while (k <= half && w.letters[i + k] == rel.letters[(start + k) % r]) ++k;
        if (k > half) return false;
      }
    }
  }
  return true;
}

Word Presentation::relator() const {
  std::vector<int> l;
  for (int i = 0; i < genus; ++i) {
    int a = 2 * i + 1, b = 2 * i + 2;
    for (int x : {a, b, -a, -b}) l.push_back(x);
  }
  return Word(l);
}

std::vector<Word> reduced_words(int genus, int n) {
  std::vector<Word> cur;
  const int G = 2 * genus;
  for (int k = 1; k <= G; ++k) {
    cur.push_back(Word({k}));
    cur.push_back(Word({-k}));
  }
  for (int len = 1; len < n; ++len) {
    std::vector<Word> next;
    for (const Word& w : cur)
      for (int k = 1; k <= G; ++k)
        for (int l : {k, -k}) {
          if (l == -w.letters.back()) continue;
          Word x = w;
          x.letters.push_back(l);
          next.push_back(std::move(x));
        }
    cur.swap(next);
  }
  return cur;
}

double normalize_angle(double a) {
  const double tau = 2 * M_PI;
  a = std::fmod(a, tau);
  if (a < 0) a += tau;
  if (a >= tau) a -= tau;
  return a;
}

Eigen::Vector2d boundary_vector(const BoundaryPoint& p) {
  double th = -p.angle / 2;
  return {std::cos(th), std::sin(th)};
}

BoundaryPoint boundary_point(const Eigen::Vector2d& v) {
  return {normalize_angle(-2 * std::atan2(v(1), v(0)))};
}

BoundaryPoint mobius(const Mat2& A, const BoundaryPoint& p) {
  Eigen::Vector2d w = A * boundary_vector(p);
  return boundary_point(w);
}

double angular_distance(const BoundaryPoint& a, const BoundaryPoint& b) {
  double d = std::abs(a.angle - b.angle);
  return std::min(d, 2 * M_PI - d);
}

bool shares_endpoint(const Chord& a, const Chord& b, double eps) {
  return angular_distance(a.first, b.first) < eps || angular_distance(a.first, b.second) < eps ||
         angular_distance(a.second, b.first) < eps || angular_distance(a.second, b.second) < eps;
}

bool linked(const Chord& a, const Chord& b, double eps) {
  if (shares_endpoint(a, b, eps)) return false;
  double lo = std::min(a.first.angle, a.second.angle), hi = std::max(a.first.angle, a.second.angle);
  auto inside = [&](double x) { return x > lo && x < hi; };
  return inside(b.first.angle) != inside(b.second.angle);
}

namespace {

Mat2 rotation(double theta) {
  // Elliptic element of SL(2,R) rotating the disk by theta about the centre.
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 R;
  R << c, s, -s, c;
  return R;
}

}  // namespace

FuchsianRep fuchsian_from_images(int genus, const std::vector<Mat2>& images, const std::string& model) {
  if (genus < 2) throw Error(ErrorCode::Unsupported, "genus must be at least 2");
  if (static_cast<int>(images.size()) != 2 * genus)
    throw Error(ErrorCode::BadInput, "expected 2g generator images");
  FuchsianRep rep;
  rep.genus = genus;
  rep.model = model;
  for (const Mat2& M : images) {
    double d = M.determinant();
    if (std::abs(d - 1.0) > 1e-8) throw Error(ErrorCode::BadInput, "generator image not in SL(2,R)");
    Mat2 A = M / std::sqrt(d);
    if (std::abs(A.trace()) <= 2.0 + tol().rank_eps)
      throw Error(ErrorCode::NotHyperbolic, "generator image is not hyperbolic");
    Mat2 Ai;
    Ai << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
    rep.images.push_back(A);
    rep.inverses.push_back(Ai);
  }
  return rep;
}

FuchsianRep default_fuchsian(int genus) {
  if (genus != 2) throw Error(ErrorCode::Unsupported, "only the genus-2 octagon model is built in");
  // Regular octagon with interior angles pi/4, side k centred at angle k pi/4 and labelled
  // by the k-th letter of a1 b1 A1 B1 a2 b2 A2 B2. T translates the side at angle pi onto
  // the side at angle 0.
  const double d = std::acosh(1.0 / std::tan(M_PI / 8));
  Mat2 T;
  T << std::exp(d), 0, 0, std::exp(-d);
  auto pairing = [&](int i, int j) {  // maps side j onto side i
    return Mat2(rotation(i * M_PI / 4) * T * rotation(M_PI - j * M_PI / 4));
  };
  std::vector<Mat2> img = {pairing(0, 2), pairing(1, 3).inverse(), pairing(4, 6), pairing(5, 7).inverse()};
  return fuchsian_from_images(2, img, "regular-octagon");
}

double relator_residual(const FuchsianRep& rep) {
  Mat2 R = rep(Presentation{rep.genus}.relator());
  return std::min((R - Mat2::Identity()).norm(), (R + Mat2::Identity()).norm());
}

Chord axis_endpoints(const Mat2& A) {
  if (std::abs(A.trace()) <= 2.0 + tol().rank_eps)
    throw Error(ErrorCode::NotHyperbolic, "axis_endpoints: element is not hyperbolic");
  double tr = A.trace();
  double disc = std::sqrt(tr * tr - 4);
  double l1 = (tr + (tr > 0 ? disc : -disc)) / 2;  // larger modulus
  double l2 = 1.0 / l1;
  auto eigvec = [&](double l) {
    Eigen::Vector2d v;
    // (A - l I) v = 0; use the row with larger norm.
    Eigen::Vector2d r0(A(0, 0) - l, A(0, 1)), r1(A(1, 0), A(1, 1) - l);
    const Eigen::Vector2d& r = r0.norm() > r1.norm() ? r0 : r1;
    v << -r(1), r(0);
    return v;
  };
  return {boundary_point(eigvec(l1)), boundary_point(eigvec(l2))};
}

Chord axis_endpoints(const FuchsianRep& rep, const Word& w) { return axis_endpoints(rep(w)); }

TorusSide torus_side(const Presentation& p, const Word& w) {
  if (p.genus != 2) throw Error(ErrorCode::Unsupported, "torus_side is defined for genus 2");
  bool t1 = false, t2 = false;
  for (int l : w.letters) (std::abs(l) <= 2 ? t1 : t2) = true;
  if (t1 && !t2) return TorusSide::T1;
  if (t2 && !t1) return TorusSide::T2;
  return TorusSide::Mixed;
}

const char* to_string(TorusSide s) {
  switch (s) {
    case TorusSide::T1: return "T1";
    case TorusSide::T2: return "T2";
    default: return "mixed";
  }
}

Vec3 klein_boundary(const BoundaryPoint& p) {
  Eigen::Vector2d v = boundary_vector(p);
  return {v(0) * v(0), v(0) * v(1), v(1) * v(1)};
}

Vec3 klein_basepoint() { return {1.0, 0.0, 1.0}; }

Mat3 sym2_matrix(const Mat2& A) {
  double a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
  Mat3 S;
  S << a * a, 2 * a * b, b * b,
       a * c, a * d + b * c, b * d,
       c * c, 2 * c * d, d * d;
  return S;
}

bool separates(const Chord& leaf, const Vec3& P, const Vec3& Q) {
  Vec3 n = klein_boundary(leaf.first).cross(klein_boundary(leaf.second));
  // Interior points are positive forms; fix their sign by the trace-like coordinate.
  double sp = n.dot(P) * (P(0) + P(2) > 0 ? 1 : -1);
  double sq = n.dot(Q) * (Q(0) + Q(2) > 0 ? 1 : -1);
  return sp * sq < 0;
}

Chord spiral_leaf(const FuchsianRep& rep, const SpiralConfig& s) {
  BoundaryPoint minus = axis_endpoints(rep, s.c1).second;
  BoundaryPoint plus = mobius(rep(s.connector), axis_endpoints(rep, s.c2).second);
  return {minus, plus};
}

std::vector<Word> group_ball(const FuchsianRep& rep, int r) {
  std::vector<Word> out{Word()};
  std::set<std::array<long long, 4>> seen;
  auto key = [](const Mat2& M) {
    Mat2 A = M;
    int i = std::abs(A(0, 0)) > 1e-9 ? 0 : 1;
    double s = (i == 0 ? A(0, 0) : A(0, 1)) < 0 ? -1.0 : 1.0;
    A *= s;
    std::array<long long, 4> k;
    for (int j = 0; j < 4; ++j) k[j] = std::llround(A(j / 2, j % 2) * 1e6);
    return k;
  };
  seen.insert(key(Mat2::Identity()));
  std::vector<std::pair<Word, Mat2>> frontier{{Word(), Mat2::Identity()}};
  const int G = 2 * rep.genus;
  for (int len = 1; len <= r; ++len) {
    std::vector<std::pair<Word, Mat2>> next;
    for (auto& [w, M] : frontier)
      for (int k = 1; k <= G; ++k)
        for (int l : {k, -k}) {
          if (!w.empty() && l == -w.letters.back()) continue;
          Mat2 N = M * (l > 0 ? rep.images[k - 1] : rep.inverses[k - 1]);
          if (!seen.insert(key(N)).second) continue;
          Word x = w;
          x.letters.push_back(l);
          out.push_back(x);
          next.push_back({x, N});
        }
    frontier.swap(next);
  }
  return out;
}

bool curves_disjoint(const FuchsianRep& rep, const Word& u, const Word& v, int ball_radius) {
  Chord au = axis_endpoints(rep, u);
  for (const Word& h : group_ball(rep, ball_radius)) {
    Mat2 H = rep(h);
    Chord c = axis_endpoints(rep, v);
    Chord hv{mobius(H, c.first), mobius(H, c.second)};
    if (linked(au, hv, 1e-9)) return false;
  }
  return true;
}

bool curve_simple(const FuchsianRep& rep, const Word& u, int ball_radius) {
  return curves_disjoint(rep, u, u, ball_radius);
}

bool spiral_simple(const FuchsianRep& rep, const SpiralConfig& s, int ball_radius) {
  Chord m = spiral_leaf(rep, s);
  Chord a1 = axis_endpoints(rep, s.c1), a2 = axis_endpoints(rep, s.c2);
  for (const Word& h : group_ball(rep, ball_radius)) {
    Mat2 H = rep(h);
    auto move = [&](const Chord& c) { return Chord{mobius(H, c.first), mobius(H, c.second)}; };
    if (!h.empty() && linked(m, move(m), 1e-9)) return false;
    if (linked(m, move(a1), 1e-9) || linked(m, move(a2), 1e-9)) return false;
  }
  return true;
}

}  // namespace cclab
