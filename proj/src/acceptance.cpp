#include "cclab/acceptance.hpp"

#include "cclab/aiet.hpp"
#include "cclab/bending.hpp"
#include "cclab/flow.hpp"
#include "cclab/hull.hpp"
#include "cclab/slithering.hpp"
#include "cclab/traintrack.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <random>

namespace cclab {

namespace {

using json = nlohmann::json;

json check(double value, double tolerance, bool ok) { return {{"value", value}, {"tol", tolerance}, {"ok", ok}}; }

Word random_word(std::mt19937_64& rng, int genus, int len) {
  std::uniform_int_distribution<int> pick(1, 2 * genus);
  std::bernoulli_distribution sgn(0.5);
  Word w;
  while (static_cast<int>(w.size()) < len) {
    int l = pick(rng) * (sgn(rng) ? 1 : -1);
    if (!w.empty() && w.letters.back() == -l) continue;
    w.letters.push_back(l);
  }
  return w;
}

Vec3 random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  return {nd(rng), nd(rng), nd(rng)};
}

// Everything the hull rows share: the default bent representation and its hulls.
struct Context {
  AcceptanceOptions opt;
  std::unique_ptr<BendingInput> in;
  std::unique_ptr<BendingResult> bent;
  std::map<int, std::unique_ptr<HullComplex>> hulls;
  std::map<int, double> hull_seconds;

  const BendingInput& input() {
    if (!in) {
      in = std::make_unique<BendingInput>();
      in->rho = default_hitchin();
      in->spiral = default_spiral();
    }
    return *in;
  }
  const BendingResult& bending() {
    if (!bent) bent = std::make_unique<BendingResult>(bend_representation(input()));
    return *bent;
  }
  const HullComplex& hull(int L) {
    auto& h = hulls[L];
    if (!h) {
      auto t0 = std::chrono::steady_clock::now();
      HullOptions o;
      o.L = L;
      h = std::make_unique<HullComplex>(build_hull(bending().eta, o));
      hull_seconds[L] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return *h;
  }
};

CriterionResult cohomology_row(Context&) {
  CriterionResult r{1, "cohomology dimensions"};
  Cohomology c = cohomology_dimensions(default_hitchin());
  bool dims = c.dim_z1 == 9 && c.dim_b1 == 3 && c.dim_h1 == 6;
  bool gaps = c.gap_z1 >= 1e3 && c.gap_b1 >= 1e3;
  r.detail = {{"dim_z1", c.dim_z1}, {"dim_b1", c.dim_b1}, {"dim_h1", c.dim_h1},
              {"gap_z1", check(c.gap_z1, 1e3, c.gap_z1 >= 1e3)}, {"gap_b1", check(c.gap_b1, 1e3, c.gap_b1 >= 1e3)}};
  r.pass = dims && gaps;
  return r;
}

CriterionResult reducibility_row(Context& ctx) {
  CriterionResult r{2, "coboundary iff reducible"};
  std::mt19937_64 rng(ctx.opt.seed + 2);
  const HitchinRep rho = default_hitchin();

  // Orthonormal basis of B^1 in flat coordinates, to split off the non-coboundary part.
  MatX B(12, 3);
  for (int i = 0; i < 3; ++i) B.col(i) = coboundary(rho, Covec3::Unit(i)).flat();
  MatX Q = Eigen::HouseholderQR<MatX>(B).householderQ() * MatX::Identity(12, 3);
  CocycleSpace Z = cocycle_space_basis(rho);

  double worst_plane = 0;
  int found = 0;
  for (int k = 0; k < 50; ++k) {
    Cocycle phi = coboundary(rho, random_vec(rng).transpose());
    Witness w = reducibility_witness(rho, phi);
    if (w.translation) ++found;
    worst_plane = std::max(worst_plane, w.plane_residual);
  }
  std::uniform_real_distribution<double> U(0.1, 1.0);
  std::normal_distribution<double> nd;
  int spurious = 0;
  double min_residual = INFINITY;
  for (int k = 0; k < 50; ++k) {
    VecX h = VecX::Zero(12);
    for (const Cocycle& z : Z.basis) h += nd(rng) * z.flat();
    h -= Q * (Q.transpose() * h);
    h *= U(rng) / h.norm();
    Cocycle phi = coboundary(rho, random_vec(rng).transpose()) + Cocycle::from_flat(h);
    Witness w = reducibility_witness(rho, phi);
    if (w.translation) ++spurious;
    min_residual = std::min(min_residual, w.residual / phi.norm());
  }
  bool plane_ok = worst_plane < 1e-9;
  r.detail = {{"coboundaries_with_witness", found},
              {"plane_residual", check(worst_plane, 1e-9, plane_ok)},
              {"non_coboundaries_with_witness", spurious},
              {"min_relative_fit_residual", min_residual}};
  r.pass = found == 50 && plane_ok && spurious == 0;
  return r;
}

CriterionResult series_row(Context& ctx) {
  CriterionResult r{3, "tail series"};
  const BendingInput& in = ctx.input();
  const HitchinRep& rho = in.rho;
  json sides = json::array();
  bool ok = true;
  for (const Word& c : {in.spiral.c1, in.spiral.c2}) {
    EigenBasis3 e = eigen_basis(rho(c), rho(inverse(c)));
    // A leaf asymptotic to the repelling end of c: its covector has no component there.
    Covec3 beta = leaf_covector(spiral_leaf_flags(rho, in.spiral).minus, spiral_leaf_flags(rho, in.spiral).plus) * e.V;
    beta(2) = 0;
    Covec3 tau = beta * e.V.inverse();
    int N = 1;
    RegionSum s = geometric_tail_sum(e, tau, N);
    while (s.bound >= 1e-12) s = geometric_tail_sum(e, tau, ++N);
    double diff = (s.B.tau - s.closed_form).norm() / s.closed_form.norm();
    bool agree = diff < 1e-10;
    ok = ok && agree;
    sides.push_back({{"curve", to_string(c)}, {"terms", N}, {"bound", s.bound},
                     {"relative_difference", check(diff, 1e-10, agree)}});
  }
  BendingInput rev = in;
  rev.spiral = reversed(in.spiral);
  std::string verdict = "no error";
  try {
    bend_representation(rev);
  } catch (const Error& e) {
    verdict = to_string(e.code());
  }
  bool divergent = verdict == "Divergent";
  r.detail = {{"sides", sides}, {"reversed_spiral", verdict}};
  r.pass = ok && divergent;
  return r;
}

CriterionResult psi_row(Context& ctx) {
  CriterionResult r{4, "psi cohomologous to phi"};
  const BendingResult& bent = ctx.bending();
  const HitchinRep& rho = ctx.input().rho;
  json depths = json::array();
  bool ok = true;
  double total = 0;
  for (int L : {ctx.opt.L, ctx.opt.L_fine}) {
    const HullComplex& H = ctx.hull(L);
    auto t0 = std::chrono::steady_clock::now();
    BendingCocycleSample bc = bending_cocycle_from_hull(H, rho, bent.base_point);
    CohomologousReport c = compare_cocycles(rho, bc.psi, bent.phi);
    double secs = ctx.hull_seconds[L] + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total += secs;
    double limit = L == ctx.opt.L ? 1e-2 : 3e-3;
    bool pass = c.relative < limit;
    ok = ok && pass;
    depths.push_back({{"L", L}, {"samples", H.samples.size()}, {"facets", H.hull.facets.size()},
                      {"relative_residual", check(c.relative, limit, pass)}, {"seconds", secs}});
  }
  bool fast = total <= 300;
  r.detail = {{"depths", depths}, {"hull_seconds", check(total, 300, fast)}};
  r.pass = ok && fast;
  return r;
}

CriterionResult localization_row(Context& ctx) {
  CriterionResult r{5, "localization"};
  const BendingInput& in = ctx.input();
  LocalizationReport a = localization(ctx.hull(ctx.opt.L), in);
  LocalizationReport b = localization(ctx.hull(ctx.opt.L_fine), in);
  bool close = a.leaves > 0 && a.max_distance < 5e-2;
  bool shrinks = b.leaves > 0 && b.max_distance <= a.max_distance;
  r.detail = {{"L", ctx.opt.L},
              {"leaves", a.leaves},
              {"max_distance", check(a.max_distance, 5e-2, close)},
              {"L_fine", ctx.opt.L_fine},
              {"leaves_fine", b.leaves},
              {"max_distance_fine", check(b.max_distance, a.max_distance, shrinks)}};
  r.pass = close && shrinks;
  return r;
}

CriterionResult growth_row(Context& ctx) {
  CriterionResult r{6, "G cocycle and flip"};
  std::mt19937_64 rng(ctx.opt.seed + 6);
  std::uniform_int_distribution<int> len(1, 12);
  const HitchinRep rho = default_hitchin();
  double splice = 0, flip = 0;
  for (int k = 0; k < 100; ++k) {
    Word u = random_word(rng, 2, len(rng)), v = random_word(rng, 2, len(rng));
    Vec3 x = random_vec(rng);
    // The word uv first runs v, then u from where v left the vector.
    Word uv = u;
    uv.letters.insert(uv.letters.end(), v.letters.begin(), v.letters.end());
    double whole = g_along_word(rho, uv, x).logG.back();
    double parts = g_along_word(rho, v, x).logG.back() + g_along_word(rho, u, rho(v) * x).logG.back();
    splice = std::max(splice, std::abs(whole - parts));
    Word w = cyclic_reduce(random_word(rng, 2, len(rng) + 1));
    GrowthTrace f = g_along_closed(rho, inverse(w), 10), b = g_along_closed(rho, w, -10);
    for (std::size_t i = 0; i < f.logG.size(); ++i) flip = std::max(flip, std::abs(f.logG[i] - b.logG[i]));
  }
  double closed = 0, fuchsian = 0;
  const HitchinRep fu = sym_square(default_fuchsian(2));
  for (const char* s : {"b2", "a2", "a1 b2", "a1 A2 b2", "b1 a2 B2"}) {
    Word w = parse_word(s);
    Vec3 x = random_vec(rng);
    LambdaPair p = lambda_estimates(g_along_closed(rho, w, 40, {}, x));
    double expect = std::log(middle_eigen_data(rho, w).l2) / static_cast<double>(w.size());
    closed = std::max({closed, std::abs(p.plus - expect), std::abs(p.minus - expect)});
    LambdaPair q = lambda_estimates(g_along_closed(fu, w, 40, {}, x));
    fuchsian = std::max({fuchsian, std::abs(q.plus), std::abs(q.minus)});
  }
  bool a = splice < 1e-9, b = flip < 1e-9, c = closed < 1e-6, d = fuchsian < 1e-10;
  r.detail = {{"splice", check(splice, 1e-9, a)},
              {"flip", check(flip, 1e-9, b)},
              {"closed_leaf_lambda", check(closed, 1e-6, c)},
              {"fuchsian_lambda", check(fuchsian, 1e-10, d)}};
  r.pass = a && b && c && d;
  return r;
}

CriterionResult slithering_row(Context& ctx) {
  CriterionResult r{7, "slithering"};
  const BendingInput& in = ctx.input();
  const HitchinRep& rho = in.rho;
  std::vector<LeafFlags> strands;
  // Strands c1^j m share the repelling end of c1; only the free end is moved, since pushing
  // the fixed flag by rho(c1)^j just amplifies rounding.
  const LeafFlags m = spiral_leaf_flags(rho, in.spiral);
  for (int j = 0; j <= 5; ++j) {
    LeafFlags g = act(rho(power(in.spiral.c1, j)), m);
    g.minus = m.minus;
    g.id = "c1^" + std::to_string(j) + ".m";
    strands.push_back(g);
  }
  double comp = 0;
  for (std::size_t n = 3; n <= strands.size(); ++n) {
    std::vector<LeafFlags> chain(strands.begin(), strands.begin() + n);
    Mat3 whole = chain_slither(chain).M;
    double scale = whole.norm();
    comp = std::max(comp, (whole - elementary_slither(chain.front(), chain.back()).M).norm() / scale);
    for (std::size_t k = 1; k + 1 < n; ++k) {
      std::vector<LeafFlags> head(chain.begin(), chain.begin() + k + 1), tail(chain.begin() + k, chain.end());
      comp = std::max(comp, (whole - chain_slither(tail).M * chain_slither(head).M).norm() / scale);
    }
  }
  const HitchinRep fu = sym_square(default_fuchsian(2));
  TriangleHolonomy sym = triangle_holonomy(fu, parse_word("a1"), parse_word("b1"), parse_word("a2"));
  TriangleHolonomy gen = triangle_holonomy(rho, parse_word("a1"), parse_word("b2"), parse_word("a2"));
  double chi_fuchsian = 0;
  for (const auto& [id, v] : slither_character(fu, spiral_track_loops(fu, in.spiral)).values)
    chi_fuchsian = std::max(chi_fuchsian, std::abs(v - 1.0));
  for (const char* c : {"a1", "b2", "a1 b2"})
    chi_fuchsian = std::max(chi_fuchsian, std::abs(loop_character(fu, closed_leaf_loop(fu, parse_word(c), c)) - 1.0));
  double chi_closed = 0;
  for (const char* c : {"b2", "a2", "a1 b2"}) {
    Word w = parse_word(c);
    double chi = loop_character(rho, closed_leaf_loop(rho, w, c));
    chi_closed = std::max(chi_closed, std::abs(std::abs(chi) - 1.0 / middle_eigen_data(rho, w).l2));
  }
  bool a = comp < 1e-8, b = sym.square_distance < 1e-8, c = gen.square_distance > 1e-5, d = chi_fuchsian < 1e-8,
       e = chi_closed < 1e-6;
  r.detail = {{"composition", check(comp, 1e-8, a)},
              {"fuchsian_triangle_square", check(sym.square_distance, 1e-8, b)},
              {"fuchsian_triple_ratio", sym.triple_ratio},
              {"bulged_triangle_square", check(gen.square_distance, 1e-5, c)},
              {"bulged_triple_ratio", gen.triple_ratio},
              {"fuchsian_character", check(chi_fuchsian, 1e-8, d)},
              {"closed_leaf_character", check(chi_closed, 1e-6, e)}};
  r.pass = a && b && c && d && e;
  return r;
}

CriterionResult feasibility_row(Context& ctx) {
  CriterionResult r{8, "affine feasibility"};
  TrainTrack loop = single_loop_track();
  const std::string id = loop.branches[0].id;
  bool at_one = affine_feasibility(loop, {{id, 1.0}}).has_value();
  bool off_one = !affine_feasibility(loop, {{id, 0.8}}) && !affine_feasibility(loop, {{id, 1.25}});

  const BendingInput& in = ctx.input();
  HolonomyCharacter chi = slither_character(in.rho, spiral_track_loops(in.rho, in.spiral));
  const double m1 = std::abs(chi.values.at("c1")), m2 = std::abs(chi.values.at("c2"));
  TrainTrack u = ungemach_track();
  auto w = affine_feasibility(u, {{"loop1", m1}, {"loop2", m2}});
  double mass_err = INFINITY;
  if (w) {
    int e = u.branch_index("e"), l1 = u.branch_index("loop1"), l2 = u.branch_index("loop2");
    // The geometric series of the spiral with first weight the connector's, as flow_growth sums it.
    AtomicEquivariantMeasure mu = atomic_measure_from_spiral(in.rho, in.spiral, w->w_start[e]);
    double side2 = mu.side_mass[1] * w->w_end(e) / w->w_start[e];
    mass_err = std::max(std::abs(w->w_start[l1] - mu.side_mass[0]) / mu.side_mass[0],
                        std::abs(w->w_start[l2] - side2) / side2);
  }
  bool ung = w && w->w_start[u.branch_index("e")] > 0 && mass_err < 1e-8;
  int dim = weight_space(maximal_genus2_track()).dimension;
  r.detail = {{"single_loop_m1_feasible", at_one},
              {"single_loop_m_ne_1_infeasible", off_one},
              {"ungemach_multipliers", {m1, m2}},
              {"ungemach_mass_error", check(mass_err, 1e-8, ung)},
              {"maximal_track_dimension", dim}};
  r.pass = at_one && off_one && ung && dim == 6;
  return r;
}

CriterionResult aiet_row(Context& ctx) {
  CriterionResult r{9, "AIET"};
  std::mt19937_64 rng(ctx.opt.seed + 9);
  const BendingInput& in = ctx.input();
  HolonomyCharacter chi = slither_character(in.rho, spiral_track_loops(in.rho, in.spiral));
  struct Case {
    TrainTrack t;
    Multipliers m;
  };
  std::vector<Case> cases = {
      {ungemach_track(), {{"loop1", std::abs(chi.values.at("c1"))}, {"loop2", std::abs(chi.values.at("c2"))}}},
      {single_loop_track(), {}},
      {two_loops_track(), {}},
      {maximal_genus2_track(), {}},
      {one_sided_track(), {}}};
  double slope = 0, mass = 0, inv = 0, overlap = 0;
  bool inv_pass = true;
  json per = json::array();
  for (const Case& c : cases) {
    auto w = affine_feasibility(c.t, c.m);
    if (!w) throw Error(ErrorCode::InfeasibleWeights, "preset " + c.t.name + " is infeasible");
    AIET T = aiet_from_track(c.t, *w);
    double s = slope_holonomy_residual(T, c.t, c.m), ms = std::abs(T.mass_transport() - 2.0);
    InvolutionReport ir = involution_check(T, 10000, 1e-9);
    TilingReport tr = tiling_check(T, rng, 20000);
    slope = std::max(slope, s);
    mass = std::max(mass, ms);
    inv = std::max(inv, ir.residual);
    inv_pass = inv_pass && ir.pass;
    overlap = std::max(overlap, std::abs(tr.overlap));
    per.push_back({{"track", c.t.name}, {"pieces", T.pieces.size()}, {"slope_residual", s}, {"mass", ms},
                   {"involution", ir.residual}, {"overlap", tr.overlap}});
  }
  bool a = slope < 1e-12, b = mass < 1e-10, c = inv_pass && inv < 1e-9, d = overlap < 1e-9;
  r.detail = {{"tracks", per},
              {"slope_residual", check(slope, 1e-12, a)},
              {"mass_transport", check(mass, 1e-10, b)},
              {"involution", check(inv, 1e-9, c)},
              {"tiling_overlap", check(overlap, 1e-9, d)}};
  r.pass = a && b && c && d;
  return r;
}

CriterionResult homogeneity_row(Context& ctx) {
  CriterionResult r{10, "homogeneity"};
  const BendingInput& in = ctx.input();
  const BendingResult& bent = ctx.bending();
  const HitchinRep& rho = in.rho;
  BendingCocycleSample base = bending_cocycle_from_hull(ctx.hull(ctx.opt.L), rho, bent.base_point);
  TrainTrack u = ungemach_track();
  HolonomyCharacter chi = slither_character(rho, spiral_track_loops(rho, in.spiral));
  Multipliers m = {{"loop1", std::abs(chi.values.at("c1"))}, {"loop2", std::abs(chi.values.at("c2"))}};
  AffineWeights w = *affine_feasibility(u, m);
  AtomicEquivariantMeasure mu = atomic_measure_from_spiral(rho, in.spiral, 1.0);
  const bool reducible = reducibility_witness(rho, bent.phi).translation.has_value();
  const bool bendable = criterion_check(rho, in.spiral).bendable;

  double psi_err = 0, mass_err = 0, weight_err = 0;
  bool verdicts = true;
  json scales = json::array();
  for (double s : {0.5, 2.5}) {
    // Bending is linear in t, so the bent cocycle at t = s is s phi.
    BendingInput is = in;
    is.t = s;
    BendingResult bs = bend_representation(is);
    double phi_err = (bs.phi - s * bent.phi).norm() / (s * bent.phi.norm());
    HullOptions o;
    o.L = ctx.opt.L;
    HullComplex H = build_hull(bs.eta, o);
    BendingCocycleSample ps = bending_cocycle_from_hull(H, rho, bs.base_point);
    double pe = (ps.psi - s * base.psi).norm() / (s * base.psi.norm());
    AtomicEquivariantMeasure ms = atomic_measure_from_spiral(rho, in.spiral, s);
    double me = std::abs(ms.total_mass - s * mu.total_mass) / (s * mu.total_mass);
    AffineWeights ws = scaled(w, s);
    double we = ws.residual(u) / s;
    for (std::size_t b = 0; b < w.w_start.size(); ++b)
      we = std::max(we, std::abs(ws.w_start[b] - s * w.w_start[b]) / (s * w.w_start[b]));
    bool same = reducibility_witness(rho, bs.phi).translation.has_value() == reducible &&
                affine_feasibility(u, m).has_value() && criterion_check(rho, in.spiral).bendable == bendable;
    verdicts = verdicts && same;
    psi_err = std::max({psi_err, pe, phi_err});
    mass_err = std::max(mass_err, me);
    weight_err = std::max(weight_err, we);
    scales.push_back({{"s", s}, {"phi", phi_err}, {"psi", pe}, {"mass", me}, {"weights", we}, {"verdicts", same}});
  }
  bool a = psi_err < 1e-6, b = mass_err < 1e-12, c = weight_err < 1e-9;
  r.detail = {{"scales", scales},
              {"psi_scaling", check(psi_err, 1e-6, a)},
              {"mass_scaling", check(mass_err, 1e-12, b)},
              {"weight_scaling", check(weight_err, 1e-9, c)},
              {"verdicts_unchanged", verdicts}};
  r.pass = a && b && c && verdicts;
  return r;
}

CriterionResult run_one(int id, Context& ctx) {
  using Row = CriterionResult (*)(Context&);
  static const Row rows[kCriterionCount] = {cohomology_row, reducibility_row, series_row,   psi_row,  localization_row,
                                            growth_row,     slithering_row,   feasibility_row, aiet_row, homogeneity_row};
  static const char* names[kCriterionCount] = {"cohomology dimensions", "coboundary iff reducible", "tail series",
                                               "psi cohomologous to phi", "localization", "G cocycle and flip",
                                               "slithering", "affine feasibility", "AIET", "homogeneity"};
  if (id < 1 || id > kCriterionCount) throw Error(ErrorCode::BadInput, "no acceptance criterion " + std::to_string(id));
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = rows[id - 1](ctx);
  } catch (const Error& e) {
    r = CriterionResult{id, names[id - 1], false, {{"error", e.what()}}};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_row) {
  Context ctx;
  ctx.opt = opt;
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_one(id, ctx));
    if (on_row) on_row(out.back());
  }
  return out;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  Context ctx;
  ctx.opt = opt;
  return run_one(id, ctx);
}

std::string format_row(const CriterionResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s  %2d  %-26s (%.2f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  return buf;
}

json to_json(const CriterionResult& r) {
  return {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}};
}

}  // namespace cclab
