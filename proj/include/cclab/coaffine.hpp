#pragma once

#include "cclab/hitchin.hpp"

#include "json.hpp"

#include <optional>
#include <vector>

namespace cclab {

// Values on generators; word values by phi(xy) = phi(x) + rho(x).phi(y).
struct Cocycle {
  std::vector<Covec3> values;

  Cocycle() = default;
  explicit Cocycle(std::vector<Covec3> v) : values(std::move(v)) {}
  static Cocycle zero(int generators) { return Cocycle(std::vector<Covec3>(generators, Covec3::Zero())); }
  VecX flat() const;  // 3 entries per generator
  static Cocycle from_flat(const VecX& x);
  double norm() const { return flat().norm(); }
};

Cocycle operator+(const Cocycle& a, const Cocycle& b);
Cocycle operator-(const Cocycle& a, const Cocycle& b);
Cocycle operator*(double s, const Cocycle& a);

Covec3 cocycle_value(const HitchinRep& rho, const Cocycle& phi, const Word& w);
double cocycle_residual(const HitchinRep& rho, const Cocycle& phi);  // |phi(relator)|

struct RankReport {
  int rank = 0;
  double gap = 0;  // smallest accepted / largest rejected singular value
  VecX singular_values;
};
// Rank of a matrix with the mandatory 1e3 gap at the cut (RankAmbiguity otherwise).
RankReport numeric_rank(const MatX& M);

struct CocycleSpace {
  std::vector<Cocycle> basis;  // orthonormal in the flat coordinates
  RankReport constraint;       // rank of the relator constraint map
};
CocycleSpace cocycle_space_basis(const HitchinRep& rho);

Cocycle coboundary(const HitchinRep& rho, const Covec3& v);
RankReport coboundary_rank(const HitchinRep& rho);

struct Cohomology {
  int dim_z1 = 0, dim_b1 = 0, dim_h1 = 0;
  double gap_z1 = 0, gap_b1 = 0;
};
Cohomology cohomology_dimensions(const HitchinRep& rho);

struct CoaffineRep {
  HitchinRep linear_part;
  Cocycle cocycle;
  std::vector<Mat4> images;
  std::vector<Mat4> inverses;

  Mat4 operator()(const Word& w) const { return evaluate(images, inverses, w); }
};

// Block image (rho(g) 0; phi(g^-1) 1).
Mat4 coaffine_block(const Mat3& A, const Covec3& bottom);
CoaffineRep assemble(const HitchinRep& rho, const Cocycle& phi);
double relator_residual(const CoaffineRep& eta);
// Bottom rows of eta(g^-1).
Cocycle extract_cocycle(const CoaffineRep& eta);

struct Translation {
  Covec3 tau = Covec3::Zero();
  Mat4 matrix() const;
};

struct Witness {
  std::optional<Translation> translation;
  double residual = 0;        // least-squares fit of phi = tau - rho.tau
  double plane_residual = 0;  // max over generators of |eta(g).(tau,1) - (tau,1)|
};
Witness reducibility_witness(const CoaffineRep& eta);
Witness reducibility_witness(const HitchinRep& rho, const Cocycle& phi);

// Translation fixing the coaffine plane over the leaf pointwise: in the basis
// e1 = xi(l-), e3 = xi(l+), e2 = intersection of the two flag lines it is t e^2.
Translation z_translation(const Flag& minus, const Flag& plus, double t);
// The unit covector e^2 of the adapted basis (vanishes on the leaf's line).
Covec3 leaf_covector(const Flag& minus, const Flag& plus);

nlohmann::json to_json(const Cocycle& phi);
Cocycle cocycle_from_json(const nlohmann::json& j, int genus);

}  // namespace cclab
