#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace cclab {

using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
// Covectors are row vectors; A.alpha = alpha * A^{-1}.
using Covec3 = Eigen::RowVector3d;
using Covec4 = Eigen::RowVector4d;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

enum class ErrorCode {
  SingularMatrix,
  NonRealSpectrum,
  NearMultipleSpectrum,
  Unsupported,
  UnknownGenerator,
  NotHyperbolic,
  RankAmbiguity,
  NotACocycle,
  DegenerateBasis,
  Divergent,
  EnumerationOverflow,
  InsufficientData,
  NonSummable,
  NonTransverse,
  NoSharedEndpoint,
  NonConvergentTail,
  UnboundedMargin,
  InfeasibleWeights,
  InconsistentCombinatorics,
  ChartDegenerate,
  HullDegenerate,
  FacetLookupFailed,
  BadInput,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Tolerance {
  double rel_eps = 1e-10;
  double rank_eps = 1e-8;
};

// Process-wide tolerance policy. Set once at startup (cli overrides); read everywhere else.
const Tolerance& tol();
void set_tolerance(const Tolerance& t);

// Unit norm, first nonzero coordinate positive.
template <class V>
V canonical(const V& v) {
  double n = v.norm();
  if (n == 0.0) throw Error(ErrorCode::BadInput, "zero vector has no projective class");
  V u = v / n;
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-14) {
      if (u(i) < 0) u = -u;
      break;
    }
  }
  return u;
}

struct Flag {
  Vec3 point;   // projective point, canonical sign
  Covec3 line;  // covector whose kernel is the line; unit norm
};

// Distance between projective classes: sin of the angle between representatives.
double proj_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

template <int N>
Eigen::Matrix<double, 1, N> dual_action(const Eigen::Matrix<double, N, N>& A,
                                        const Eigen::Matrix<double, 1, N>& alpha) {
  if (std::abs(A.determinant()) < tol().rank_eps)
    throw Error(ErrorCode::SingularMatrix, "dual_action: singular matrix");
  return alpha * A.inverse();
}

struct EigenPair {
  double value;
  Eigen::VectorXd vector;  // canonical representative
};

// Real spectrum sorted by decreasing |lambda|.
std::vector<EigenPair> eigen_sorted(const Eigen::MatrixXd& A);

// Eigenbasis columns in decreasing |lambda| order plus eigenvalues.
struct EigenBasis3 {
  Vec3 values;
  Mat3 V;  // columns are eigenvectors (unit norm, canonical sign)
  Covec3 left3;  // left eigenvector of the smallest eigenvalue
};
EigenBasis3 eigen_basis(const Mat3& A);
// Well-conditioned variant for det A = 1 when an accurate inverse is available
// (e.g. the image of the inverse word).
EigenBasis3 eigen_basis(const Mat3& A, const Mat3& Ainv);

Flag attracting_flag(const Mat3& A);
Flag attracting_flag(const Mat3& A, const Mat3& Ainv);
Flag repelling_flag(const Mat3& A);

// Pairing bound for transversality |<line, point>| of unit representatives.
double transversality(const Flag& f, const Flag& g);

}  // namespace cclab
