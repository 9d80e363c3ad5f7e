#include "cclab/core.hpp"

#include <algorithm>
#include <complex>
#include <cmath>

namespace cclab {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NonRealSpectrum: return "NonRealSpectrum";
    case ErrorCode::NearMultipleSpectrum: return "NearMultipleSpectrum";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::RankAmbiguity: return "RankAmbiguity";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::EnumerationOverflow: return "EnumerationOverflow";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonSummable: return "NonSummable";
    case ErrorCode::NonTransverse: return "NonTransverse";
    case ErrorCode::NoSharedEndpoint: return "NoSharedEndpoint";
    case ErrorCode::NonConvergentTail: return "NonConvergentTail";
    case ErrorCode::UnboundedMargin: return "UnboundedMargin";
    case ErrorCode::InfeasibleWeights: return "InfeasibleWeights";
    case ErrorCode::InconsistentCombinatorics: return "InconsistentCombinatorics";
    case ErrorCode::ChartDegenerate: return "ChartDegenerate";
    case ErrorCode::HullDegenerate: return "HullDegenerate";
    case ErrorCode::FacetLookupFailed: return "FacetLookupFailed";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {
Tolerance g_tol;
}

const Tolerance& tol() { return g_tol; }

void set_tolerance(const Tolerance& t) {
  if (!(t.rel_eps > 0 && t.rel_eps < 1) || !(t.rank_eps > 0 && t.rank_eps < 1))
    throw Error(ErrorCode::BadInput, "tolerances must lie in (0,1)");
  g_tol = t;
}

double proj_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd u = a.normalized(), v = b.normalized();
  // The rejection keeps small angles accurate, unlike sqrt(1 - cos^2).
  return std::min(1.0, (v - v.dot(u) * u).norm());
}

std::vector<EigenPair> eigen_sorted(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NonRealSpectrum, "eigensolver failed");
  const auto& lam = es.eigenvalues();
  const auto& vec = es.eigenvectors();
  const int n = static_cast<int>(A.rows());
  double scale = std::max(1.0, A.norm());
  std::vector<EigenPair> out;
  for (int i = 0; i < n; ++i) {
    if (std::abs(lam(i).imag()) > tol().rank_eps * scale)
      throw Error(ErrorCode::NonRealSpectrum, "complex eigenvalue");
    Eigen::VectorXd v = vec.col(i).real();
    out.push_back({lam(i).real(), canonical(v)});
  }
  std::sort(out.begin(), out.end(),
            [](const EigenPair& a, const EigenPair& b) { return std::abs(a.value) > std::abs(b.value); });
  for (int i = 0; i + 1 < n; ++i) {
    double gap = std::abs(out[i].value) - std::abs(out[i + 1].value);
    if (gap < tol().rank_eps * std::abs(out[i].value))
      throw Error(ErrorCode::NearMultipleSpectrum, "eigenvalue moduli nearly coincide");
  }
  // One step of inverse iteration per eigenvalue tightens the vectors.
  for (auto& p : out) {
    Eigen::MatrixXd B = A - p.value * (1 + 1e-9) * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd w = B.partialPivLu().solve(p.vector);
    if (w.allFinite() && w.norm() > 0) p.vector = canonical(w);
  }
  return out;
}

namespace {

struct TopPair {
  double value;
  Vec3 vector;
};

// Dominant eigenpair of a 3x3 matrix; the top eigenvalue is resolved to full relative
// precision even when the spectrum spans many orders of magnitude.
TopPair top_pair(const Mat3& M) {
  Eigen::EigenSolver<Mat3> es(M);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NonRealSpectrum, "eigensolver failed");
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
  std::complex<double> l = es.eigenvalues()(best);
  if (std::abs(l.imag()) > tol().rank_eps * std::abs(l))
    throw Error(ErrorCode::NonRealSpectrum, "complex dominant eigenvalue");
  Vec3 v = es.eigenvectors().col(best).real();
  Mat3 B = M - l.real() * (1 + 1e-9) * Mat3::Identity();
  Vec3 w = B.partialPivLu().solve(v);
  if (w.allFinite() && w.norm() > 0) v = w;
  return {l.real(), canonical(v)};
}

}  // namespace

EigenBasis3 eigen_basis(const Mat3& A, const Mat3& Ainv) {
  // Outer eigenpairs from A and A^-1, the middle one from the two invariant planes
  // (kernels of the outer left eigenvectors). Assumes det A = 1.
  TopPair r1 = top_pair(A), r3 = top_pair(Ainv);
  TopPair l1 = top_pair(A.transpose()), l3 = top_pair(Ainv.transpose());
  EigenBasis3 b;
  b.values << r1.value, 1.0 / (r1.value * (1.0 / r3.value)), 1.0 / r3.value;
  if (std::abs(b.values(0)) - std::abs(b.values(1)) < tol().rank_eps * std::abs(b.values(0)) ||
      std::abs(b.values(1)) - std::abs(b.values(2)) < tol().rank_eps * std::abs(b.values(1)))
    throw Error(ErrorCode::NearMultipleSpectrum, "eigenvalue moduli nearly coincide");
  Vec3 v2 = l1.vector.cross(l3.vector);
  if (v2.norm() < tol().rank_eps) throw Error(ErrorCode::NearMultipleSpectrum, "invariant planes coincide");
  b.V.col(0) = r1.vector;
  b.V.col(1) = canonical(v2);
  b.V.col(2) = r3.vector;
  b.left3 = l3.vector.transpose();
  return b;
}

EigenBasis3 eigen_basis(const Mat3& A) {
  double d = A.determinant();
  if (std::abs(d) < tol().rank_eps) throw Error(ErrorCode::SingularMatrix, "eigen_basis: singular matrix");
  double c = std::cbrt(d);
  EigenBasis3 b = eigen_basis(A / c, (A / c).inverse());
  b.values *= c;
  return b;
}

Flag attracting_flag(const Mat3& A, const Mat3& Ainv) {
  EigenBasis3 b = eigen_basis(A, Ainv);
  Flag f;
  f.point = b.V.col(0);
  // The span of the top two eigenvectors is the kernel of the bottom left eigenvector.
  f.line = canonical(Eigen::VectorXd(b.left3.transpose())).transpose();
  return f;
}

Flag attracting_flag(const Mat3& A) {
  double c = std::cbrt(A.determinant());
  return attracting_flag(A / c, (A / c).inverse());
}

Flag repelling_flag(const Mat3& A) { return attracting_flag(A.inverse()); }

double transversality(const Flag& f, const Flag& g) {
  return std::min(std::abs(f.line.dot(g.point.transpose())), std::abs(g.line.dot(f.point.transpose())));
}

}  // namespace cclab
