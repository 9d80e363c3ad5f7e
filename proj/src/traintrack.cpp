#include "cclab/traintrack.hpp"

#include "cclab/lp.hpp"

#include <cmath>
#include <functional>
#include <set>

namespace cclab {

int TrainTrack::branch_index(const std::string& id) const {
  for (std::size_t i = 0; i < branches.size(); ++i)
    if (branches[i].id == id) return static_cast<int>(i);
  throw Error(ErrorCode::BadInput, "unknown branch " + id);
}

int TrainTrack::switch_index(const std::string& id) const {
  for (std::size_t i = 0; i < switches.size(); ++i)
    if (switches[i].id == id) return static_cast<int>(i);
  throw Error(ErrorCode::BadInput, "unknown switch " + id);
}

namespace {

// +1 if the half-branch sits on the out side of its switch, -1 for in.
std::map<std::pair<int, bool>, int> half_sides(const TrainTrack& t) {
  std::map<std::pair<int, bool>, int> side;
  for (std::size_t s = 0; s < t.switches.size(); ++s) {
    const Switch& sw = t.switches[s];
    if (sw.in.empty() || sw.out.empty())
      throw Error(ErrorCode::InconsistentCombinatorics, "switch " + sw.id + " needs both sides");
    for (int pass = 0; pass < 2; ++pass)
      for (const HalfBranch& h : pass == 0 ? sw.in : sw.out) {
        if (h.branch < 0 || h.branch >= static_cast<int>(t.branches.size()))
          throw Error(ErrorCode::InconsistentCombinatorics, "switch " + sw.id + " names a missing branch");
        const Branch& b = t.branches[h.branch];
        if ((h.at_to ? b.to : b.from) != static_cast<int>(s))
          throw Error(ErrorCode::InconsistentCombinatorics, "branch " + b.id + " does not end at " + sw.id);
        if (!side.emplace(std::make_pair(h.branch, h.at_to), pass == 0 ? -1 : 1).second)
          throw Error(ErrorCode::InconsistentCombinatorics, "half-branch of " + b.id + " listed twice");
      }
  }
  if (side.size() != 2 * t.branches.size())
    throw Error(ErrorCode::InconsistentCombinatorics, "some half-branch is not attached to a switch");
  return side;
}

double mult(const Multipliers& m, const std::string& id) {
  auto it = m.find(id);
  if (it == m.end()) return 1.0;
  if (!(it->second > 0)) throw Error(ErrorCode::BadInput, "multiplier of " + id + " must be positive");
  return it->second;
}

}  // namespace

void validate(TrainTrack& t) {
  auto side = half_sides(t);
  for (std::size_t b = 0; b < t.branches.size(); ++b)
    t.branches[b].flip = side[{static_cast<int>(b), false}] == side[{static_cast<int>(b), true}];
}

bool orientable(const TrainTrack& t) {
  // Two-colour the switches: a flipped branch joins opposite orientations.
  std::vector<int> o(t.switches.size(), 0);
  for (std::size_t s0 = 0; s0 < o.size(); ++s0) {
    if (o[s0]) continue;
    o[s0] = 1;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Branch& b : t.branches) {
        int want = b.flip ? -1 : 1;
        for (int pass = 0; pass < 2; ++pass) {
          int u = pass ? b.to : b.from, v = pass ? b.from : b.to;
          if (o[u] && !o[v]) {
            o[v] = want * o[u];
            changed = true;
          }
        }
        if (o[b.from] && o[b.to] && o[b.from] * o[b.to] != want) return false;
      }
    }
  }
  return true;
}

int component_count(const TrainTrack& t) {
  std::vector<int> parent(t.switches.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const Branch& b : t.branches) parent[find(b.from)] = find(b.to);
  std::set<int> roots;
  for (std::size_t i = 0; i < parent.size(); ++i) roots.insert(find(static_cast<int>(i)));
  return static_cast<int>(roots.size());
}

MatX switch_matrix(const TrainTrack& t, const Multipliers& m) {
  half_sides(t);
  MatX A = MatX::Zero(t.switches.size(), t.branches.size());
  for (std::size_t s = 0; s < t.switches.size(); ++s) {
    for (int pass = 0; pass < 2; ++pass)
      for (const HalfBranch& h : pass == 0 ? t.switches[s].in : t.switches[s].out) {
        double w = h.at_to ? mult(m, t.branches[h.branch].id) : 1.0;
        A(s, h.branch) += pass == 0 ? w : -w;
      }
  }
  return A;
}

WeightSpace weight_space(const TrainTrack& t) {
  MatX A = switch_matrix(t, {});
  WeightSpace ws;
  ws.rank = numeric_rank(A);
  Eigen::JacobiSVD<MatX> svd(A, Eigen::ComputeFullV);
  const MatX& V = svd.matrixV();
  for (int j = ws.rank.rank; j < V.cols(); ++j) ws.basis.push_back(V.col(j));
  ws.dimension = static_cast<int>(ws.basis.size());
  return ws;
}

double AffineWeights::residual(const TrainTrack& t) const {
  double r = 0;
  for (const Switch& sw : t.switches) {
    double s = 0;
    for (const HalfBranch& h : sw.in) s += h.at_to ? w_end(h.branch) : w_start[h.branch];
    for (const HalfBranch& h : sw.out) s -= h.at_to ? w_end(h.branch) : w_start[h.branch];
    r = std::max(r, std::abs(s));
  }
  return r;
}

std::optional<AffineWeights> affine_feasibility(const TrainTrack& t, const Multipliers& m, double eps) {
  const int n = static_cast<int>(t.branches.size());
  const int k = static_cast<int>(t.switches.size());
  for (const auto& [id, v] : m) {
    t.branch_index(id);
    if (!(v > 0)) throw Error(ErrorCode::BadInput, "multiplier of " + id + " must be positive");
  }
  MatX A = switch_matrix(t, m);
  AffineWeights out;
  RankReport rr = numeric_rank(A);
  out.log.push_back("switch rank " + std::to_string(rr.rank) + " of " + std::to_string(k) + " (gap " +
                    std::to_string(rr.gap) + ")");
  // Variables (delta, s_1..s_n) >= 0 with w = delta + s.
  MatX L = MatX::Zero(k + 1, n + 1);
  VecX rhs = VecX::Zero(k + 1);
  L.block(0, 1, k, n) = A;
  L.block(0, 0, k, 1) = A.rowwise().sum();
  L.block(k, 1, 1, n).setOnes();
  L(k, 0) = n;
  rhs(k) = 1.0;
  VecX c = VecX::Zero(n + 1);
  c(0) = -1.0;
  LpResult lp = solve_lp(L, rhs, c);
  out.log.push_back(std::string("lp ") + to_string(lp.status) + " after " + std::to_string(lp.pivots) + " pivots");
  if (lp.status == LpResult::Unbounded) throw Error(ErrorCode::UnboundedMargin, "margin LP is unbounded");
  if (lp.status != LpResult::Optimal || lp.x(0) <= eps) {
    out.log.push_back("no strictly positive solution");
    return std::nullopt;
  }
  out.margin = lp.x(0);
  out.w_start.resize(n);
  out.m.resize(n);
  for (int b = 0; b < n; ++b) {
    out.w_start[b] = lp.x(0) + lp.x(b + 1);
    out.m[b] = mult(m, t.branches[b].id);
  }
  out.total_mass = 1.0;
  out.log.push_back("margin " + std::to_string(out.margin));
  return out;
}

AffineWeights scaled(const AffineWeights& w, double s) {
  if (!(s > 0)) throw Error(ErrorCode::BadInput, "scale must be positive");
  AffineWeights o = w;
  for (double& x : o.w_start) x *= s;
  o.margin *= s;
  o.total_mass *= s;
  return o;
}

double cycle_multiplier(const TrainTrack& t, const Multipliers& m, const std::vector<std::pair<int, int>>& cycle) {
  double p = 1.0;
  for (auto [b, dir] : cycle) {
    double v = mult(m, t.branches.at(b).id);
    p *= dir > 0 ? v : 1.0 / v;
  }
  return p;
}

TrainTrack orientation_cover(const TrainTrack& t) {
  auto side = half_sides(t);
  const int ns = static_cast<int>(t.switches.size());
  TrainTrack c;
  c.name = t.name + " cover";
  for (int e = 0; e < 2; ++e)
    for (const Switch& s : t.switches) c.switches.push_back({s.id + (e ? "-" : "+"), {}, {}});
  for (int e = 0; e < 2; ++e)
    for (std::size_t b = 0; b < t.branches.size(); ++b) {
      const Branch& o = t.branches[b];
      int e_to = o.flip ? 1 - e : e;
      Branch nb{o.id + (e ? "-" : "+"), o.from + e * ns, o.to + e_to * ns, false};
      int idx = static_cast<int>(c.branches.size());
      c.branches.push_back(nb);
      for (int end = 0; end < 2; ++end) {
        int sheet = end ? e_to : e;
        int sd = side[{static_cast<int>(b), end == 1}] * (sheet ? -1 : 1);
        Switch& sw = c.switches[end ? nb.to : nb.from];
        (sd < 0 ? sw.in : sw.out).push_back({idx, end == 1});
      }
    }
  validate(c);
  return c;
}

TrainTrack subdivide(const TrainTrack& t, const std::string& id) {
  TrainTrack s = t;
  int b = t.branch_index(id);
  int ns = static_cast<int>(s.switches.size());
  Branch a = t.branches[b], c = t.branches[b];
  a.id = id + ".a";
  a.to = ns;
  c.id = id + ".b";
  c.from = ns;
  s.branches[b] = a;
  int cb = static_cast<int>(s.branches.size());
  s.branches.push_back(c);
  // The old to-end now belongs to the second half.
  for (Switch& sw : s.switches)
    for (auto* side : {&sw.in, &sw.out})
      for (HalfBranch& h : *side)
        if (h.branch == b && h.at_to) h.branch = cb;
  s.switches.push_back({id + ".s", {{b, true}}, {{cb, false}}});
  validate(s);
  return s;
}

Multipliers subdivide(const Multipliers& m, const std::string& id, double m1) {
  if (!(m1 > 0)) throw Error(ErrorCode::BadInput, "split multiplier must be positive");
  Multipliers o = m;
  double total = mult(m, id);
  o.erase(id);
  o[id + ".a"] = m1;
  o[id + ".b"] = total / m1;
  return o;
}

namespace {

HalfBranch parse_half(const TrainTrack& t, const std::string& s, int sw, bool in_side) {
  auto at = s.find('@');
  std::string id = s.substr(0, at);
  int b = t.branch_index(id);
  const Branch& br = t.branches[b];
  if (at != std::string::npos) {
    std::string end = s.substr(at + 1);
    if (end != "from" && end != "to") throw Error(ErrorCode::BadInput, "half-branch end must be from or to");
    return {b, end == "to"};
  }
  if (br.from == sw && br.to == sw) return {b, in_side};  // loops: in is the to-end
  if (br.to == sw) return {b, true};
  if (br.from == sw) return {b, false};
  throw Error(ErrorCode::InconsistentCombinatorics, "branch " + id + " does not end at switch " + t.switches[sw].id);
}

TrainTrack build(const std::string& name, const std::vector<std::tuple<std::string, std::string, std::string>>& br,
                 const std::vector<std::tuple<std::string, std::vector<std::string>, std::vector<std::string>>>& sw) {
  TrainTrack t;
  t.name = name;
  for (const auto& [id, in, out] : sw) t.switches.push_back({id, {}, {}});
  for (const auto& [id, from, to] : br) t.branches.push_back({id, t.switch_index(from), t.switch_index(to), false});
  for (std::size_t s = 0; s < sw.size(); ++s) {
    for (const auto& h : std::get<1>(sw[s])) t.switches[s].in.push_back(parse_half(t, h, static_cast<int>(s), true));
    for (const auto& h : std::get<2>(sw[s])) t.switches[s].out.push_back(parse_half(t, h, static_cast<int>(s), false));
  }
  validate(t);
  return t;
}

}  // namespace

TrainTrack single_loop_track() { return build("single loop", {{"loop", "s", "s"}}, {{"s", {"loop"}, {"loop"}}}); }

TrainTrack two_loops_track() {
  return build("two loops", {{"loop1", "s1", "s1"}, {"loop2", "s2", "s2"}},
               {{"s1", {"loop1"}, {"loop1"}}, {"s2", {"loop2"}, {"loop2"}}});
}

TrainTrack ungemach_track() {
  // Loop masses solve w = w_in + m w, the geometric series of the spiral.
  return build("ungemach", {{"loop1", "s1", "s1"}, {"loop2", "s2", "s2"}, {"e", "s1", "s2"}},
               {{"s1", {"e@from", "loop1@to"}, {"loop1@from"}}, {"s2", {"e@to", "loop2@to"}, {"loop2@from"}}});
}

TrainTrack maximal_genus2_track() {
  // Switch v has half-branches 3v (large side) and 3v+1, 3v+2 (small side, cusp between them),
  // in that cyclic order; each pair below is a branch. Faces of this ribbon graph are four
  // trigons, so the surface has genus 2, and the track carries a positive weight.
  static const int pairs[18][2] = {{0, 10},  {1, 4},   {2, 31},  {3, 15},  {5, 24},  {6, 27},
                                   {7, 23},  {8, 13},  {9, 33},  {11, 12}, {14, 22}, {16, 34},
                                   {17, 26}, {18, 32}, {19, 25}, {20, 29}, {21, 28}, {30, 35}};
  TrainTrack t;
  t.name = "maximal genus 2";
  for (int v = 0; v < 12; ++v) t.switches.push_back({"v" + std::to_string(v), {}, {}});
  for (int j = 0; j < 18; ++j) {
    int a = pairs[j][0], b = pairs[j][1];
    t.branches.push_back({"b" + std::to_string(j), a / 3, b / 3, false});
    for (int end = 0; end < 2; ++end) {
      int h = end ? b : a;
      Switch& sw = t.switches[h / 3];
      (h % 3 == 0 ? sw.in : sw.out).push_back({j, end == 1});
    }
  }
  validate(t);
  return t;
}

TrainTrack one_sided_track() {
  return build("one sided", {{"a", "s", "s"}, {"b", "s", "s"}},
               {{"s", {"a@from", "a@to"}, {"b@from", "b@to"}}});
}

nlohmann::json to_json(const TrainTrack& t, const Multipliers& m) {
  nlohmann::json j;
  j["name"] = t.name;
  j["branches"] = nlohmann::json::array();
  for (const Branch& b : t.branches)
    j["branches"].push_back(
        {{"id", b.id}, {"from", t.switches[b.from].id}, {"to", t.switches[b.to].id}, {"flip", b.flip}});
  auto half = [&](const HalfBranch& h) { return t.branches[h.branch].id + (h.at_to ? "@to" : "@from"); };
  j["switches"] = nlohmann::json::array();
  for (const Switch& s : t.switches) {
    nlohmann::json in = nlohmann::json::array(), out = nlohmann::json::array();
    for (const HalfBranch& h : s.in) in.push_back(half(h));
    for (const HalfBranch& h : s.out) out.push_back(half(h));
    j["switches"].push_back({{"id", s.id}, {"in", in}, {"out", out}});
  }
  j["multipliers"] = nlohmann::json::object();
  for (const auto& [k, v] : m) j["multipliers"][k] = v;
  return j;
}

TrainTrack track_from_json(const nlohmann::json& j, Multipliers* m) {
  try {
    TrainTrack t;
    t.name = j.value("name", std::string("track"));
    for (const auto& s : j.at("switches")) t.switches.push_back({s.at("id").get<std::string>(), {}, {}});
    std::vector<std::optional<bool>> given;
    for (const auto& b : j.at("branches")) {
      t.branches.push_back({b.at("id").get<std::string>(), t.switch_index(b.at("from").get<std::string>()),
                            t.switch_index(b.at("to").get<std::string>()), false});
      given.push_back(b.contains("flip") ? std::optional<bool>(b.at("flip").get<bool>()) : std::nullopt);
    }
    const auto& sw = j.at("switches");
    for (std::size_t s = 0; s < sw.size(); ++s) {
      for (const auto& h : sw[s].at("in"))
        t.switches[s].in.push_back(parse_half(t, h.get<std::string>(), static_cast<int>(s), true));
      for (const auto& h : sw[s].at("out"))
        t.switches[s].out.push_back(parse_half(t, h.get<std::string>(), static_cast<int>(s), false));
    }
    validate(t);
    for (std::size_t b = 0; b < given.size(); ++b)
      if (given[b] && *given[b] != t.branches[b].flip)
        throw Error(ErrorCode::InconsistentCombinatorics, "flip flag of " + t.branches[b].id + " disagrees with switch sides");
    if (m) {
      m->clear();
      if (j.contains("multipliers"))
        for (const auto& [k, v] : j.at("multipliers").items()) {
          t.branch_index(k);
          (*m)[k] = v.get<double>();
        }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("track JSON: ") + e.what());
  }
}

nlohmann::json to_json(const TrainTrack& t, const AffineWeights& w) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t b = 0; b < t.branches.size(); ++b)
    j[t.branches[b].id] = {{"start", w.w_start[b]}, {"end", w.w_end(static_cast<int>(b))}, {"m", w.m[b]}};
  return {{"weights", j}, {"margin", w.margin}, {"total_mass", w.total_mass}, {"log", w.log}};
}

}  // namespace cclab
