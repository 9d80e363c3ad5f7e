#include "cclab/coaffine.hpp"

#include <cmath>
#include <limits>

namespace cclab {

VecX Cocycle::flat() const {
  VecX x(3 * values.size());
  for (std::size_t g = 0; g < values.size(); ++g) x.segment<3>(3 * g) = values[g].transpose();
  return x;
}

Cocycle Cocycle::from_flat(const VecX& x) {
  Cocycle c;
  for (int g = 0; g < x.size() / 3; ++g) c.values.push_back(x.segment<3>(3 * g).transpose());
  return c;
}

Cocycle operator+(const Cocycle& a, const Cocycle& b) { return Cocycle::from_flat(a.flat() + b.flat()); }
Cocycle operator-(const Cocycle& a, const Cocycle& b) { return Cocycle::from_flat(a.flat() - b.flat()); }
Cocycle operator*(double s, const Cocycle& a) { return Cocycle::from_flat(s * a.flat()); }

Covec3 cocycle_value(const HitchinRep& rho, const Cocycle& phi, const Word& w) {
  // phi(x1..xn) = sum_k rho(x1..x_{k-1}).phi(x_k), with phi(x^-1) = -phi(x) rho(x).
  Covec3 out = Covec3::Zero();
  Mat3 prefix_inv = Mat3::Identity();
  for (int l : w.letters) {
    int k = std::abs(l) - 1;
    if (k >= static_cast<int>(phi.values.size())) throw Error(ErrorCode::UnknownGenerator, "cocycle letter");
    Covec3 v = l > 0 ? phi.values[k] : Covec3(-phi.values[k] * rho.images[k]);
    out += v * prefix_inv;
    prefix_inv = (l > 0 ? rho.inverses[k] : rho.images[k]) * prefix_inv;
  }
  return out;
}

double cocycle_residual(const HitchinRep& rho, const Cocycle& phi) {
  return cocycle_value(rho, phi, Presentation{rho.genus}.relator()).norm();
}

RankReport numeric_rank(const MatX& M) {
  const int n = static_cast<int>(std::max(M.rows(), M.cols()));
  MatX P = MatX::Zero(n, n);
  P.topLeftCorner(M.rows(), M.cols()) = M;
  Eigen::JacobiSVD<MatX> svd(P);
  RankReport r;
  r.singular_values = svd.singularValues();
  const double smax = r.singular_values(0);
  if (smax == 0.0) {
    r.gap = std::numeric_limits<double>::infinity();
    return r;
  }
  const double thr = tol().rank_eps * smax;
  while (r.rank < n && r.singular_values(r.rank) > thr) ++r.rank;
  if (r.rank == 0 || r.rank == n) {
    r.gap = std::numeric_limits<double>::infinity();
  } else {
    double rejected = r.singular_values(r.rank);
    r.gap = rejected > 0 ? r.singular_values(r.rank - 1) / rejected : std::numeric_limits<double>::infinity();
  }
  if (r.gap < 1e3)
    throw Error(ErrorCode::RankAmbiguity, "singular values straddle the rank threshold (gap " +
                                              std::to_string(r.gap) + ")");
  return r;
}

namespace {

MatX constraint_matrix(const HitchinRep& rho) {
  const int G = 2 * rho.genus;
  Word R = Presentation{rho.genus}.relator();
  MatX L(3, 3 * G);
  for (int j = 0; j < 3 * G; ++j) {
    VecX e = VecX::Zero(3 * G);
    e(j) = 1;
    L.col(j) = cocycle_value(rho, Cocycle::from_flat(e), R).transpose();
  }
  return L;
}

MatX coboundary_matrix(const HitchinRep& rho) {
  const int G = 2 * rho.genus;
  MatX C(3 * G, 3);
  for (int i = 0; i < 3; ++i) {
    Covec3 v = Covec3::Zero();
    v(i) = 1;
    C.col(i) = coboundary(rho, v).flat();
  }
  return C;
}

}  // namespace

CocycleSpace cocycle_space_basis(const HitchinRep& rho) {
  MatX L = constraint_matrix(rho);
  CocycleSpace out;
  out.constraint = numeric_rank(L);
  Eigen::JacobiSVD<MatX> svd(L, Eigen::ComputeFullV);
  const MatX& V = svd.matrixV();
  for (int j = out.constraint.rank; j < V.cols(); ++j) out.basis.push_back(Cocycle::from_flat(V.col(j)));
  return out;
}

Cocycle coboundary(const HitchinRep& rho, const Covec3& v) {
  Cocycle c;
  for (std::size_t g = 0; g < rho.images.size(); ++g) c.values.push_back(v * rho.inverses[g] - v);
  return c;
}

RankReport coboundary_rank(const HitchinRep& rho) { return numeric_rank(coboundary_matrix(rho)); }

Cohomology cohomology_dimensions(const HitchinRep& rho) {
  Cohomology h;
  CocycleSpace z = cocycle_space_basis(rho);
  RankReport b = coboundary_rank(rho);
  h.dim_z1 = static_cast<int>(z.basis.size());
  h.dim_b1 = b.rank;
  h.dim_h1 = h.dim_z1 - h.dim_b1;
  h.gap_z1 = z.constraint.gap;
  h.gap_b1 = b.gap;
  return h;
}

Mat4 coaffine_block(const Mat3& A, const Covec3& bottom) {
  Mat4 M = Mat4::Zero();
  M.topLeftCorner<3, 3>() = A;
  M.block<1, 3>(3, 0) = bottom;
  M(3, 3) = 1;
  return M;
}

CoaffineRep assemble(const HitchinRep& rho, const Cocycle& phi) {
  const int G = 2 * rho.genus;
  if (static_cast<int>(phi.values.size()) != G) throw Error(ErrorCode::BadInput, "cocycle has wrong arity");
  double scale = std::max(1.0, phi.norm());
  double res = cocycle_residual(rho, phi);
  if (res > 1e-9 * scale)
    throw Error(ErrorCode::NotACocycle, "relator constraint residual " + std::to_string(res));
  CoaffineRep eta;
  eta.linear_part = rho;
  eta.cocycle = phi;
  for (int g = 0; g < G; ++g) {
    Covec3 inv_value = -phi.values[g] * rho.images[g];  // phi(g^-1)
    eta.images.push_back(coaffine_block(rho.images[g], inv_value));
    eta.inverses.push_back(coaffine_block(rho.inverses[g], phi.values[g]));
  }
  return eta;
}

double relator_residual(const CoaffineRep& eta) {
  return (eta(Presentation{eta.linear_part.genus}.relator()) - Mat4::Identity()).norm();
}

Cocycle extract_cocycle(const CoaffineRep& eta) {
  Cocycle c;
  for (const Mat4& M : eta.inverses) c.values.push_back(M.block<1, 3>(3, 0));
  return c;
}

Mat4 Translation::matrix() const { return coaffine_block(Mat3::Identity(), tau); }

Witness reducibility_witness(const HitchinRep& rho, const Cocycle& phi) {
  // phi(g) = tau - rho(g).tau = tau (I - rho(g)^-1), stacked over generators.
  MatX A = -coboundary_matrix(rho);
  VecX b = phi.flat();
  numeric_rank(A);
  Eigen::Vector3d tau = A.colPivHouseholderQr().solve(b);
  Witness w;
  w.residual = (A * tau - b).norm();
  double scale = std::max(b.norm(), std::numeric_limits<double>::min());
  if (b.norm() == 0.0 || w.residual < tol().rel_eps * scale * std::max(1.0, A.norm())) {
    Translation t;
    t.tau = tau.transpose();
    Covec4 plane;
    plane << t.tau, 1.0;
    CoaffineRep eta = assemble(rho, phi);
    for (const Mat4& Mi : eta.inverses)
      w.plane_residual = std::max(w.plane_residual, (plane * Mi - plane).norm());
    w.translation = t;
  }
  return w;
}

Witness reducibility_witness(const CoaffineRep& eta) {
  return reducibility_witness(eta.linear_part, extract_cocycle(eta));
}

Covec3 leaf_covector(const Flag& minus, const Flag& plus) {
  Vec3 e1 = minus.point, e3 = plus.point;
  Vec3 e2 = minus.line.transpose().cross(plus.line.transpose());
  if (e2.norm() < tol().rank_eps || e1.cross(e3).norm() < tol().rank_eps)
    throw Error(ErrorCode::DegenerateBasis, "leaf flags are not transverse");
  e2 = canonical(e2);
  Covec3 n = e1.cross(e3).transpose();
  double d = n.dot(e2.transpose());
  if (std::abs(d) < tol().rank_eps * n.norm())
    throw Error(ErrorCode::DegenerateBasis, "flag-line intersection lies on the leaf");
  return n / d;
}

Translation z_translation(const Flag& minus, const Flag& plus, double t) {
  Translation z;
  z.tau = t * leaf_covector(minus, plus);
  return z;
}

nlohmann::json to_json(const Cocycle& phi) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t g = 0; g < phi.values.size(); ++g)
    j[generator_name(static_cast<int>(g))] = {phi.values[g](0), phi.values[g](1), phi.values[g](2)};
  return j;
}

Cocycle cocycle_from_json(const nlohmann::json& j, int genus) {
  Cocycle c = Cocycle::zero(2 * genus);
  for (int g = 0; g < 2 * genus; ++g) {
    const std::string name = generator_name(g);
    if (!j.contains(name)) throw Error(ErrorCode::BadInput, "cocycle JSON lacks generator " + name);
    const auto& v = j.at(name);
    if (!v.is_array() || v.size() != 3) throw Error(ErrorCode::BadInput, "cocycle value must have 3 entries");
    for (int i = 0; i < 3; ++i) c.values[g](i) = v[i].get<double>();
  }
  return c;
}

}  // namespace cclab
