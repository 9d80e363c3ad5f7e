#include "cclab/aiet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cclab {

double AietPiece::operator()(double x) const {
  if (slope > 0) return image_left + slope * (x - left);
  return image_left + image_length() + slope * (x - left);
}

int AIET::piece_at(double r, double eps) const {
  if (r < 0 || r >= 2.0) return -1;
  auto it = std::upper_bound(pieces.begin(), pieces.end(), r,
                             [](double x, const AietPiece& p) { return x < p.left; });
  if (it == pieces.begin()) return -1;
  int i = static_cast<int>(it - pieces.begin()) - 1;
  const AietPiece& p = pieces[i];
  if (r - p.left < eps || p.left + p.length - r < eps) return -1;
  return i;
}

double AIET::operator()(double r) const {
  int i = piece_at(r, 0.0);
  if (i < 0) throw Error(ErrorCode::BadInput, "point outside the AIET domain");
  return pieces[i](r);
}

double AIET::mass_transport() const {
  double s = 0;
  for (const AietPiece& p : pieces) s += p.image_length();
  return s;
}

double involution(double r) { return std::fmod(r + 1.0, 2.0); }

AIET make_aiet(std::vector<AietPiece> pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const AietPiece& a, const AietPiece& b) { return a.left < b.left; });
  double x = 0;
  const double eps = 1e-12;
  for (const AietPiece& p : pieces) {
    if (!(p.length > 0) || p.slope == 0.0 || !std::isfinite(p.slope))
      throw Error(ErrorCode::InconsistentCombinatorics, "piece " + p.label + " has empty length or zero slope");
    if (std::abs(p.left - x) > eps) throw Error(ErrorCode::InconsistentCombinatorics, "pieces do not tile at " + p.label);
    if (p.image_left < -eps || p.image_left + p.image_length() > 2.0 + eps)
      throw Error(ErrorCode::InconsistentCombinatorics, "image of " + p.label + " leaves [0,2]");
    x = p.left + p.length;
  }
  if (std::abs(x - 2.0) > 1e-10) throw Error(ErrorCode::InconsistentCombinatorics, "pieces do not cover [0,2)");
  return AIET{std::move(pieces)};
}

AIET aiet_from_track(const TrainTrack& t, const AffineWeights& w) {
  const int nb = static_cast<int>(t.branches.size());
  if (static_cast<int>(w.w_start.size()) != nb || static_cast<int>(w.m.size()) != nb)
    throw Error(ErrorCode::InconsistentCombinatorics, "weights do not match the track");
  for (int b = 0; b < nb; ++b)
    if (!(w.w_start[b] > 0) || !(w.m[b] > 0))
      throw Error(ErrorCode::InfeasibleWeights, "weight of " + t.branches[b].id + " is not positive");
  auto weight = [&](const HalfBranch& h) { return h.at_to ? w.w_end(h.branch) : w.w_start[h.branch]; };

  const int ns = static_cast<int>(t.switches.size());
  std::vector<double> tie(ns, 0.0);
  double total = 0, worst = 0;
  for (int s = 0; s < ns; ++s) {
    double in = 0;
    for (const HalfBranch& h : t.switches[s].in) in += weight(h);
    for (const HalfBranch& h : t.switches[s].out) tie[s] += weight(h);
    worst = std::max(worst, std::abs(in - tie[s]) / std::max(in, tie[s]));
    total += tie[s];
  }
  if (worst > 1e-9) throw Error(ErrorCode::InfeasibleWeights, "switch conditions fail (relative residual " +
                                                                  std::to_string(worst) + ")");
  std::vector<double> offset(ns, 0.0);
  for (int s = 1; s < ns; ++s) offset[s] = offset[s - 1] + tie[s - 1] / total;

  // side[(b, at_to)] = 0 for the in side, 1 for out; pos = stacking position on that side.
  std::map<std::pair<int, bool>, std::pair<int, double>> where;
  for (int s = 0; s < ns; ++s)
    for (int side = 0; side < 2; ++side) {
      double pos = 0;
      for (const HalfBranch& h : side ? t.switches[s].out : t.switches[s].in) {
        where[{h.branch, h.at_to}] = {side, pos};
        pos += weight(h) / total;
      }
    }

  std::vector<AietPiece> pieces;
  for (int sheet = 0; sheet < 2; ++sheet)
    for (int s = 0; s < ns; ++s) {
      // Out side of sheet + is the original out side; sheet - uses the original in side.
      for (const HalfBranch& h : sheet == 0 ? t.switches[s].out : t.switches[s].in) {
        const Branch& b = t.branches[h.branch];
        HalfBranch other{h.branch, !h.at_to};
        auto [oside, opos] = where.at({other.branch, other.at_to});
        int target = oside == 0 ? 0 : 1;  // arrive on the in side of the target sheet
        int to_switch = other.at_to ? b.to : b.from;
        AietPiece p;
        p.left = sheet + offset[s] + where.at({h.branch, h.at_to}).second;
        p.length = weight(h) / total;
        p.forward = !h.at_to;
        p.slope = (p.forward ? w.m[h.branch] : 1.0 / w.m[h.branch]) * (sheet == target ? 1.0 : -1.0);
        p.image_left = target + offset[to_switch] + opos;
        p.branch = h.branch;
        p.sheet = sheet;
        p.target_sheet = target;
        p.label = b.id + (p.forward ? ">" : "<") + (sheet ? "-" : "+");
        pieces.push_back(p);
      }
    }
  return make_aiet(std::move(pieces));
}

double slope_holonomy_residual(const AIET& T, const TrainTrack& t, const Multipliers& m) {
  double r = 0;
  for (const AietPiece& p : T.pieces) {
    if (p.branch < 0) throw Error(ErrorCode::InconsistentCombinatorics, "piece " + p.label + " has no branch");
    auto it = m.find(t.branches.at(p.branch).id);
    double chi = it == m.end() ? 1.0 : it->second;
    if (!p.forward) chi = 1.0 / chi;
    if (p.sheet != p.target_sheet) chi = -chi;
    r = std::max(r, std::abs(p.slope - chi));
  }
  return r;
}

Orbit iterate(const AIET& T, double r, int n) {
  Orbit o;
  o.points.push_back(r);
  for (int k = 0; k < n; ++k) {
    int i = T.piece_at(r);
    if (i < 0) {
      o.truncated = true;
      break;
    }
    r = T.pieces[i](r);
    o.points.push_back(r);
  }
  return o;
}

InvolutionReport involution_check(const AIET& T, int grid, double tol) {
  InvolutionReport rep;
  const double guard = 1e-9;
  for (int i = 0; i < grid; ++i) {
    double r = (i + 0.5) * 2.0 / grid;
    int a = T.piece_at(r, guard);
    if (a < 0) {
      ++rep.skipped;
      continue;
    }
    double x = involution(T.pieces[a](r));
    int b = T.piece_at(x, guard);
    if (b < 0) {
      ++rep.skipped;
      continue;
    }
    double y = involution(T.pieces[b](x));
    double d = std::abs(y - r);
    d = std::min(d, 2.0 - d);
    ++rep.tested;
    if (d > rep.residual) {
      rep.residual = d;
      rep.worst_label = T.pieces[a].label;
    }
  }
  rep.pass = rep.tested > 0 && rep.residual < tol;
  return rep;
}

TilingReport tiling_check(const AIET& T, std::mt19937_64& rng, int samples) {
  std::vector<std::pair<double, double>> im;
  double total = 0;
  for (const AietPiece& p : T.pieces) {
    im.emplace_back(p.image_left, p.image_left + p.image_length());
    total += p.image_length();
  }
  std::sort(im.begin(), im.end());
  double uni = 0, lo = im[0].first, hi = im[0].second;
  for (std::size_t i = 1; i < im.size(); ++i) {
    if (im[i].first > hi) {
      uni += hi - lo;
      lo = im[i].first;
    }
    hi = std::max(hi, im[i].second);
  }
  uni += hi - lo;
  TilingReport rep;
  rep.overlap = total - uni;
  rep.gap = 2.0 - uni;
  std::uniform_real_distribution<double> U(0.0, 2.0);
  int miss = 0;
  for (int k = 0; k < samples; ++k) {
    double x = U(rng);
    bool hit = std::any_of(im.begin(), im.end(), [&](const auto& iv) { return iv.first <= x && x < iv.second; });
    if (!hit) ++miss;
  }
  rep.mc_uncovered = static_cast<double>(miss) / samples;
  return rep;
}

namespace {

std::string fmt(double x, const char* f = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, const Orbit& orbit) {
  os << "step,r\n";
  for (std::size_t k = 0; k < orbit.points.size(); ++k) os << k << ',' << fmt(orbit.points[k], "%.15g") << '\n';
  if (orbit.truncated) os << "# truncated at a discontinuity\n";
}

void write_csv(std::ostream& os, const AIET& T) {
  os << "label,left,length,slope,image_left,sheet,target_sheet\n";
  for (const AietPiece& p : T.pieces)
    os << p.label << ',' << fmt(p.left, "%.15g") << ',' << fmt(p.length, "%.15g") << ',' << fmt(p.slope, "%.15g")
       << ',' << fmt(p.image_left, "%.15g") << ',' << p.sheet << ',' << p.target_sheet << '\n';
}

std::string aiet_svg(const AIET& T, const std::vector<Orbit>& orbits) {
  const double S = 400, pad = 20;
  auto X = [&](double x) { return fmt(pad + x / 2.0 * S, "%.3f"); };
  auto Y = [&](double y) { return fmt(pad + S - y / 2.0 * S, "%.3f"); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << S + 2 * pad << "\" height=\"" << S + 2 * pad
     << "\">\n";
  os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << S << "\" height=\"" << S
     << "\" fill=\"none\" stroke=\"#999\"/>\n";
  os << "<line x1=\"" << X(1) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(1) << "\" y2=\"" << Y(2)
     << "\" stroke=\"#ccc\"/>\n";
  os << "<line x1=\"" << X(0) << "\" y1=\"" << Y(1) << "\" x2=\"" << X(2) << "\" y2=\"" << Y(1)
     << "\" stroke=\"#ccc\"/>\n";
  for (const AietPiece& p : T.pieces) {
    double a = p.left, b = p.left + p.length;
    os << "<line x1=\"" << X(a) << "\" y1=\"" << Y(p(a)) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(p(b))
       << "\" stroke=\"" << (p.flip() ? "#c33" : "#236") << "\" stroke-width=\"2\"><title>" << p.label
       << "</title></line>\n";
  }
  for (const Orbit& o : orbits)
    for (std::size_t k = 0; k + 1 < o.points.size(); ++k)
      os << "<circle cx=\"" << X(o.points[k]) << "\" cy=\"" << Y(o.points[k + 1]) << "\" r=\"1.5\" fill=\"#e90\"/>\n";
  os << "</svg>\n";
  return os.str();
}

nlohmann::json to_json(const AIET& T) {
  nlohmann::json j = nlohmann::json::array();
  for (const AietPiece& p : T.pieces)
    j.push_back({{"label", p.label},
                 {"left", p.left},
                 {"length", p.length},
                 {"slope", p.slope},
                 {"image_left", p.image_left},
                 {"sheet", p.sheet},
                 {"target_sheet", p.target_sheet}});
  return {{"pieces", j}, {"mass_transport", T.mass_transport()}};
}

}  // namespace cclab
