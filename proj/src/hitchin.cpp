#include "cclab/hitchin.hpp"

#include <algorithm>
#include <cmath>

namespace cclab {

HitchinRep sym_square(const FuchsianRep& rep) {
  HitchinRep h;
  h.genus = rep.genus;
  h.fuchsian = rep;
  for (std::size_t k = 0; k < rep.images.size(); ++k) {
    h.images.push_back(sym2_matrix(rep.images[k]));
    h.inverses.push_back(sym2_matrix(rep.inverses[k]));
  }
  return h;
}

double relator_residual(const HitchinRep& rep) {
  return (rep(Presentation{rep.genus}.relator()) - Mat3::Identity()).norm();
}

Mat3 bulge_conjugator(const HitchinRep& rep, const Word& w, double s) {
  EigenBasis3 b = eigen_basis(rep(w), rep(inverse(w)));
  Vec3 d(std::exp(s), std::exp(-2 * s), std::exp(s));
  return b.V * d.asDiagonal() * b.V.inverse();
}

Mat3 bulge_conjugator(const HitchinRep& rep, double s) {
  return bulge_conjugator(rep, commutator(Word({1}), Word({2})), s);
}

HitchinRep handle_bulge(const HitchinRep& rep, int handle, double s) {
  if (handle < 1 || handle > rep.genus) throw Error(ErrorCode::BadInput, "handle index out of range");
  HitchinRep out = rep;
  if (s == 0.0) return out;
  const int a = 2 * (handle - 1), b = a + 1;
  Word w({a + 1});
  Mat3 D = bulge_conjugator(rep, w, s), Di = bulge_conjugator(rep, w, -s);
  out.images[b] = rep.images[b] * D;
  out.inverses[b] = Di * rep.inverses[b];
  out.handle_s += s;
  out.provenance = "bulged";
  return out;
}

HitchinRep default_hitchin(double s, double u) {
  return handle_bulge(bulge(sym_square(default_fuchsian(2)), s), 2, u);
}

HitchinRep bulge(const HitchinRep& rep, double s) {
  if (rep.provenance != "fuchsian")
    throw Error(ErrorCode::BadInput, "bulge expects a Fuchsian-locus representation");
  if (rep.genus != 2) throw Error(ErrorCode::Unsupported, "bulge is defined for genus 2");
  HitchinRep out = rep;
  out.bulge_s = s;
  out.provenance = s == 0.0 ? "fuchsian" : "bulged";
  if (s == 0.0) return out;
  Mat3 D = bulge_conjugator(rep, s), Di = bulge_conjugator(rep, -s);
  for (int k : {2, 3}) {
    out.images[k] = D * rep.images[k] * Di;
    out.inverses[k] = D * rep.inverses[k] * Di;
  }
  return out;
}

namespace {
MiddleEigen from_basis(const EigenBasis3& b) {
  if (b.values(0) <= 0 || b.values(1) <= 0 || b.values(2) <= 0)
    throw Error(ErrorCode::NonRealSpectrum, "spectrum is not positive");
  return {b.values(0), b.values(1), b.values(2)};
}
}  // namespace

MiddleEigen middle_eigen_data(const Mat3& A) { return from_basis(eigen_basis(A)); }

MiddleEigen middle_eigen_data(const HitchinRep& rep, const Word& w) {
  return from_basis(eigen_basis(rep(w), rep(inverse(w))));
}

LimitSample sample_limit_curve(const HitchinRep& rep, int L) {
  if (L < 1) throw Error(ErrorCode::BadInput, "L must be positive");
  LimitSample s;
  s.word_length_bound = L;
  for (int n = 1; n <= L; ++n)
    for (const Word& w : reduced_words(rep.genus, n)) {
      if (!is_cyclically_reduced(w)) continue;
      LimitEntry e;
      e.point = axis_endpoints(rep.fuchsian, w).first;
      e.flag = attracting_flag(rep(w), rep(inverse(w)));
      e.word = w;
      s.entries.push_back(e);
    }
  std::stable_sort(s.entries.begin(), s.entries.end(),
                   [](const LimitEntry& a, const LimitEntry& b) { return a.point.angle < b.point.angle; });
  std::vector<LimitEntry> dedup;
  for (const auto& e : s.entries)
    if (dedup.empty() || e.point.angle - dedup.back().point.angle > 1e-9) dedup.push_back(e);
  if (dedup.size() > 1 && 2 * M_PI - dedup.back().point.angle + dedup.front().point.angle <= 1e-9)
    dedup.pop_back();
  s.entries.swap(dedup);
  return s;
}

double min_transversality(const LimitSample& s) {
  double m = 1.0;
  for (std::size_t i = 0; i < s.entries.size(); ++i)
    for (std::size_t j = i + 1; j < s.entries.size(); ++j)
      m = std::min(m, transversality(s.entries[i].flag, s.entries[j].flag));
  return m;
}

Word first_middle_gap_word(const HitchinRep& rep, int max_len, double gap) {
  Presentation p{rep.genus};
  for (int n = 1; n <= max_len; ++n)
    for (const Word& w : reduced_words(rep.genus, n)) {
      if (!is_cyclically_reduced(w) || torus_side(p, w) != TorusSide::Mixed) continue;
      if (std::abs(middle_eigen_data(rep, w).l2 - 1.0) > gap) return w;
    }
  throw Error(ErrorCode::NotHyperbolic, "no word with a middle-eigenvalue gap found");
}

ConeChart cone_chart(const HitchinRep& rep, int L) {
  LimitSample s = sample_limit_curve(rep, L);
  const std::size_t n = s.entries.size();
  if (n < 3) throw Error(ErrorCode::InsufficientData, "cone_chart needs at least three limit points");
  std::vector<Vec3> lift(n);
  lift[0] = s.entries[0].flag.point;
  for (std::size_t i = 1; i < n; ++i) {
    Vec3 v = s.entries[i].flag.point;
    lift[i] = v.dot(lift[i - 1]) >= 0 ? v : Vec3(-v);
  }
  if (lift.back().dot(lift.front()) < 0)
    throw Error(ErrorCode::ChartDegenerate, "limit-curve lift does not close up");
  ConeChart c;
  c.interior = Vec3::Zero();
  for (const Vec3& v : lift) c.interior += v;
  c.interior.normalize();
  c.kappa = Covec3::Zero();
  for (const auto& e : s.entries) {
    Covec3 l = e.flag.line;
    c.kappa += l.dot(c.interior.transpose()) >= 0 ? l : Covec3(-l);
  }
  c.kappa.normalize();
  c.margin = INFINITY;
  for (const Vec3& v : lift) c.margin = std::min(c.margin, c.kappa.dot(v.transpose()));
  if (c.margin <= 0) throw Error(ErrorCode::ChartDegenerate, "no positive chart covector found");
  return c;
}

Vec3 cone_lift(const ConeChart& chart, const Vec3& x) {
  double k = chart.kappa.dot(x.transpose());
  if (std::abs(k) < tol().rank_eps * x.norm()) throw Error(ErrorCode::ChartDegenerate, "point on the chart line");
  return k > 0 ? x : Vec3(-x);
}

LoxodromyReport loxodromy_certificate(const HitchinRep& rep, int max_len) {
  LoxodromyReport r;
  r.min_gap_ratio = INFINITY;
  for (int n = 1; n <= max_len; ++n)
    for (const Word& w : reduced_words(rep.genus, n)) {
      if (!is_cyclically_reduced(w)) continue;
      ++r.words_checked;
      try {
        MiddleEigen e = middle_eigen_data(rep, w);
        r.min_gap_ratio = std::min({r.min_gap_ratio, e.l1 / e.l2, e.l2 / e.l3});
      } catch (const Error& err) {
        r.ok = false;
        r.failure = to_string(w) + ": " + err.what();
        return r;
      }
    }
  return r;
}

}  // namespace cclab
