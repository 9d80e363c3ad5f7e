#include "cclab/config.hpp"

#include "cclab/io.hpp"

#include <set>

namespace cclab {

namespace {

using json = nlohmann::json;

void known_keys(const json& j, const std::string& where, std::set<std::string> keys) {
  if (!j.is_object()) throw Error(ErrorCode::BadInput, where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw Error(ErrorCode::BadInput, "unknown key " + where + "." + k);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::BadInput, where + "." + key + " has the wrong type");
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  known_keys(j, "config", {"seed", "output_dir", "representation", "bending", "sampling", "track", "aiet", "tolerance"});
  read(j, "seed", c.seed, "config");
  read(j, "output_dir", c.output_dir, "config");
  if (j.contains("representation")) {
    const json& r = j.at("representation");
    known_keys(r, "representation", {"model", "genus", "bulge_s", "handle_s", "fuchsian"});
    read(r, "model", c.model, "representation");
    read(r, "genus", c.genus, "representation");
    read(r, "bulge_s", c.bulge_s, "representation");
    read(r, "handle_s", c.handle_s, "representation");
    if (r.contains("fuchsian")) c.fuchsian_json = r.at("fuchsian");
  }
  if (j.contains("bending")) {
    const json& b = j.at("bending");
    known_keys(b, "bending", {"c1", "c2", "connector", "t", "eps_sum"});
    read(b, "c1", c.c1, "bending");
    read(b, "c2", c.c2, "bending");
    read(b, "connector", c.connector, "bending");
    read(b, "t", c.t, "bending");
    read(b, "eps_sum", c.eps_sum, "bending");
  }
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    known_keys(s, "sampling", {"L", "N_cap", "focus_power"});
    read(s, "L", c.L, "sampling");
    read(s, "N_cap", c.N_cap, "sampling");
    read(s, "focus_power", c.focus_power, "sampling");
  }
  if (j.contains("track")) {
    const json& t = j.at("track");
    known_keys(t, "track", {"name", "multipliers"});
    read(t, "name", c.track, "track");
    if (t.contains("multipliers")) c.multipliers = t.at("multipliers");
  }
  if (j.contains("aiet")) {
    const json& a = j.at("aiet");
    known_keys(a, "aiet", {"orbit_steps", "orbit_start"});
    read(a, "orbit_steps", c.orbit_steps, "aiet");
    read(a, "orbit_start", c.orbit_start, "aiet");
  }
  if (j.contains("tolerance")) {
    const json& t = j.at("tolerance");
    known_keys(t, "tolerance", {"rel_eps", "rank_eps"});
    read(t, "rel_eps", c.tolerance.rel_eps, "tolerance");
    read(t, "rank_eps", c.tolerance.rank_eps, "tolerance");
  }
  validate(c);
  return c;
}

json to_json(const ExperimentConfig& c) {
  json rep = {{"model", c.model}, {"genus", c.genus}, {"bulge_s", c.bulge_s}, {"handle_s", c.handle_s}};
  if (!c.fuchsian_json.is_null()) rep["fuchsian"] = c.fuchsian_json;
  return {{"seed", c.seed},
          {"output_dir", c.output_dir},
          {"representation", rep},
          {"bending", {{"c1", c.c1}, {"c2", c.c2}, {"connector", c.connector}, {"t", c.t}, {"eps_sum", c.eps_sum}}},
          {"sampling", {{"L", c.L}, {"N_cap", c.N_cap}, {"focus_power", c.focus_power}}},
          {"track", {{"name", c.track}, {"multipliers", c.multipliers}}},
          {"aiet", {{"orbit_steps", c.orbit_steps}, {"orbit_start", c.orbit_start}}},
          {"tolerance", {{"rel_eps", c.tolerance.rel_eps}, {"rank_eps", c.tolerance.rank_eps}}}};
}

void validate(const ExperimentConfig& c) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::BadInput, m); };
  if (c.model != "regular-octagon" && c.model != "explicit") bad("representation.model must be regular-octagon or explicit");
  if (c.model == "explicit" && c.fuchsian_json.is_null()) bad("explicit model needs representation.fuchsian");
  if (c.genus < 2) bad("genus must be at least 2");
  if (!(std::abs(c.bulge_s) <= 5) || !(std::abs(c.handle_s) <= 5)) bad("bulge parameters must lie in [-5, 5]");
  if (!(std::abs(c.t) <= 1e6)) bad("bending.t out of range");
  if (!(c.eps_sum > 0 && c.eps_sum < 1e-3)) bad("bending.eps_sum must lie in (0, 1e-3)");
  if (c.L < 1 || c.L > 14) bad("sampling.L must lie in [1, 14]");
  if (c.N_cap < 4) bad("sampling.N_cap must be at least 4");
  if (c.focus_power < 0 || c.focus_power > 8) bad("sampling.focus_power must lie in [0, 8]");
  if (c.orbit_steps < 0 || c.orbit_steps > 10000000) bad("aiet.orbit_steps out of range");
  if (!(c.orbit_start >= 0 && c.orbit_start < 2)) bad("aiet.orbit_start must lie in [0, 2)");
  if (!c.multipliers.is_object()) bad("track.multipliers must be an object");
  for (const auto& [k, v] : c.multipliers.items())
    if (!v.is_number() || !(v.get<double>() > 0)) bad("multiplier " + k + " must be a positive number");
  const Tolerance& t = c.tolerance;
  if (!(t.rel_eps > 0 && t.rel_eps <= 1e-4)) bad("tolerance.rel_eps must lie in (0, 1e-4]");
  if (!(t.rank_eps > 0 && t.rank_eps <= 1e-4)) bad("tolerance.rank_eps must lie in (0, 1e-4]");
}

HitchinRep make_representation(const ExperimentConfig& c) {
  FuchsianRep fu;
  if (c.model == "explicit") {
    fu = fuchsian_from_json(c.fuchsian_json);
    if (fu.genus != c.genus) throw Error(ErrorCode::BadInput, "explicit generators disagree with representation.genus");
  } else {
    fu = default_fuchsian(c.genus);
  }
  HitchinRep rho = sym_square(fu);
  if (c.bulge_s != 0.0) rho = bulge(rho, c.bulge_s);
  if (c.handle_s != 0.0) rho = handle_bulge(rho, 2, c.handle_s);
  return rho;
}

BendingInput make_bending_input(const ExperimentConfig& c) {
  BendingInput in;
  in.rho = make_representation(c);
  in.spiral = {parse_word(c.c1, c.genus), parse_word(c.c2, c.genus), parse_word(c.connector, c.genus)};
  in.t = c.t;
  in.eps_sum = c.eps_sum;
  return in;
}

HullOptions make_hull_options(const ExperimentConfig& c) {
  HullOptions o;
  o.L = c.L;
  o.N_cap = c.N_cap;
  if (c.focus_power > 0) {
    o.focus = {parse_word(c.c1, c.genus)};
    o.focus_power = c.focus_power;
  }
  return o;
}

std::optional<TrainTrack> track_preset(const std::string& name) {
  if (name == "single_loop") return single_loop_track();
  if (name == "two_loops") return two_loops_track();
  if (name == "ungemach") return ungemach_track();
  if (name == "maximal_genus2") return maximal_genus2_track();
  if (name == "one_sided") return one_sided_track();
  return std::nullopt;
}

}  // namespace cclab
