#include "rvprd/config.hpp"

#include <cmath>
#include <json.hpp>
#include <set>

#include "rvprd/errors.hpp"

namespace rvprd {

using nlohmann::json;

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::rvprd: return "rvprd";
    case Mode::reduction21: return "reduction21";
    case Mode::vlasov_poisson: return "vlasov_poisson";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "rvprd") return Mode::rvprd;
  if (s == "reduction21") return Mode::reduction21;
  if (s == "vlasov_poisson") return Mode::vlasov_poisson;
  throw ConfigError("mode", "unknown mode '" + s + "' (expected rvprd, reduction21 or vlasov_poisson)");
}

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected a JSON object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(join(path, it.key()), "unknown key");
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

Vec3 get_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(path, "expected an array of 3 numbers");
  return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]"), get_number(v[2], path + "[2]")};
}

template <class T, class F>
void read(const json& obj, const char* key, const std::string& path, T& out, F&& get) {
  auto it = obj.find(key);
  if (it != obj.end()) out = get(*it, join(path, key));
}

void read_number(const json& o, const char* k, const std::string& p, double& out) { read(o, k, p, out, get_number); }
void read_int(const json& o, const char* k, const std::string& p, int& out) { read(o, k, p, out, get_int); }
void read_bool(const json& o, const char* k, const std::string& p, bool& out) { read(o, k, p, out, get_bool); }
void read_optional(const json& o, const char* k, const std::string& p, std::optional<double>& out) {
  auto it = o.find(k);
  if (it == o.end() || it->is_null()) return;
  out = get_number(*it, join(p, k));
}

void read_species(const json& o, const std::string& path, SpeciesProfile& s) {
  reject_unknown(o, path, {"amplitude", "center_x", "center_p"});
  read_number(o, "amplitude", path, s.amplitude);
  read(o, "center_x", path, s.center_x, get_vec3);
  read(o, "center_p", path, s.center_p, get_vec3);
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json species_json(const SpeciesProfile& s) {
  return {{"amplitude", s.amplitude}, {"center_x", vec_json(s.center_x)}, {"center_p", vec_json(s.center_p)}};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  reject_unknown(root, "", {"mode", "epsilon", "dt", "T", "horizon_fraction", "grid", "sampling", "datum", "output",
                            "override_horizon", "picard", "sweep"});
  RunConfig c;
  if (auto it = root.find("mode"); it != root.end()) {
    if (!it->is_string()) throw ConfigError("mode", "expected a string");
    c.mode = parse_mode(it->get<std::string>());
  }
  read_number(root, "epsilon", "", c.epsilon);
  read_optional(root, "dt", "", c.dt);
  read_optional(root, "T", "", c.horizon);
  read_number(root, "horizon_fraction", "", c.horizon_fraction);
  read_bool(root, "override_horizon", "", c.override_horizon);
  if (auto it = root.find("grid"); it != root.end()) {
    reject_unknown(*it, "grid", {"L", "n"});
    read_optional(*it, "L", "grid", c.extent);
    read_int(*it, "n", "grid", c.nodes);
  }
  if (auto it = root.find("sampling"); it != root.end()) {
    reject_unknown(*it, "sampling", {"m"});
    read_int(*it, "m", "sampling", c.sampling);
  }
  if (auto it = root.find("datum"); it != root.end()) {
    reject_unknown(*it, "datum", {"spatial_radius", "momentum_radius", "plus", "minus"});
    read_number(*it, "spatial_radius", "datum", c.datum.spatial_radius);
    read_number(*it, "momentum_radius", "datum", c.datum.momentum_radius);
    if (auto s = it->find("plus"); s != it->end()) read_species(*s, "datum.plus", c.datum.plus);
    if (auto s = it->find("minus"); s != it->end()) read_species(*s, "datum.minus", c.datum.minus);
  }
  if (auto it = root.find("output"); it != root.end()) {
    reject_unknown(*it, "output", {"cadence", "snapshots", "dir"});
    read_int(*it, "cadence", "output", c.cadence);
    read_bool(*it, "snapshots", "output", c.snapshots);
    if (auto d = it->find("dir"); d != it->end() && !d->is_null()) {
      if (!d->is_string()) throw ConfigError("output.dir", "expected a string");
      c.output_dir = d->get<std::string>();
    }
  }
  if (auto it = root.find("picard"); it != root.end()) {
    reject_unknown(*it, "picard",
                   {"iterations", "n", "m", "horizon_fraction", "time_points", "substeps", "markers"});
    read_int(*it, "iterations", "picard", c.picard.iterations);
    read_int(*it, "n", "picard", c.picard.nodes);
    read_int(*it, "m", "picard", c.picard.sampling);
    read_number(*it, "horizon_fraction", "picard", c.picard.horizon_fraction);
    read_int(*it, "time_points", "picard", c.picard.time_points);
    read_int(*it, "substeps", "picard", c.picard.substeps);
    read_int(*it, "markers", "picard", c.picard.markers);
  }
  if (auto it = root.find("sweep"); it != root.end()) {
    reject_unknown(*it, "sweep", {"epsilons"});
    if (auto e = it->find("epsilons"); e != it->end()) {
      if (!e->is_array() || e->empty()) throw ConfigError("sweep.epsilons", "expected a non-empty array");
      c.sweep_epsilons.clear();
      for (std::size_t i = 0; i < e->size(); ++i)
        c.sweep_epsilons.push_back(get_number((*e)[i], "sweep.epsilons[" + std::to_string(i) + "]"));
    }
  }
  validate_config(c);
  return c;
}

void validate_config(const RunConfig& c) {
  auto in_unit = [](double e) { return e >= 0.0 && e <= 1.0; };
  if (!in_unit(c.epsilon))
    throw ConfigError("epsilon", "value " + std::to_string(c.epsilon) + " outside [0,1]");
  for (std::size_t i = 0; i < c.sweep_epsilons.size(); ++i)
    if (!in_unit(c.sweep_epsilons[i]))
      throw ConfigError("sweep.epsilons[" + std::to_string(i) + "]",
                        "epsilon value " + std::to_string(c.sweep_epsilons[i]) + " outside [0,1]");
  if (c.dt && !(*c.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (c.horizon && !(*c.horizon >= 0.0)) throw ConfigError("T", "must be non-negative");
  if (!(c.horizon_fraction >= 0.0)) throw ConfigError("horizon_fraction", "must be non-negative");
  if (c.extent && !(*c.extent > 0.0)) throw ConfigError("grid.L", "must be positive");
  if (!is_power_of_two(c.nodes) || c.nodes < 8) throw ConfigError("grid.n", "must be a power of two >= 8");
  if (c.sampling < 4) throw ConfigError("sampling.m", "must be at least 4");
  if (!(c.datum.spatial_radius > 0.0)) throw ConfigError("datum.spatial_radius", "must be positive");
  if (!(c.datum.momentum_radius > 0.0)) throw ConfigError("datum.momentum_radius", "must be positive");
  if (!(c.datum.plus.amplitude >= 0.0)) throw ConfigError("datum.plus.amplitude", "must be non-negative");
  if (!(c.datum.minus.amplitude >= 0.0)) throw ConfigError("datum.minus.amplitude", "must be non-negative");
  if (c.cadence < 1) throw ConfigError("output.cadence", "must be at least 1");
  const PicardConfig& p = c.picard;
  if (p.iterations < 2) throw ConfigError("picard.iterations", "must be at least 2");
  if (!is_power_of_two(p.nodes) || p.nodes < 8) throw ConfigError("picard.n", "must be a power of two >= 8");
  if (p.sampling < 4) throw ConfigError("picard.m", "must be at least 4");
  if (!(p.horizon_fraction > 0.0)) throw ConfigError("picard.horizon_fraction", "must be positive");
  if (p.time_points < 1) throw ConfigError("picard.time_points", "must be at least 1");
  if (p.substeps < 1) throw ConfigError("picard.substeps", "must be at least 1");
  if (p.markers < 1) throw ConfigError("picard.markers", "must be at least 1");
}

std::string serialize_config(const RunConfig& c) {
  json root;
  root["mode"] = mode_name(c.mode);
  root["epsilon"] = c.epsilon;
  if (c.dt) root["dt"] = *c.dt;
  if (c.horizon) root["T"] = *c.horizon;
  root["horizon_fraction"] = c.horizon_fraction;
  root["grid"] = {{"n", c.nodes}};
  if (c.extent) root["grid"]["L"] = *c.extent;
  root["sampling"] = {{"m", c.sampling}};
  root["datum"] = {{"spatial_radius", c.datum.spatial_radius},
                   {"momentum_radius", c.datum.momentum_radius},
                   {"plus", species_json(c.datum.plus)},
                   {"minus", species_json(c.datum.minus)}};
  root["output"] = {{"cadence", c.cadence}, {"snapshots", c.snapshots}};
  if (c.output_dir) root["output"]["dir"] = *c.output_dir;
  root["override_horizon"] = c.override_horizon;
  root["picard"] = {{"iterations", c.picard.iterations}, {"n", c.picard.nodes},
                    {"m", c.picard.sampling}, {"horizon_fraction", c.picard.horizon_fraction},
                    {"time_points", c.picard.time_points}, {"substeps", c.picard.substeps},
                    {"markers", c.picard.markers}};
  root["sweep"] = {{"epsilons", c.sweep_epsilons}};
  return root.dump(2);
}

InitialDatum make_datum(const DatumConfig& d) {
  return InitialDatum(d.spatial_radius, d.momentum_radius, d.plus, d.minus);
}

RunSetup resolve_setup(const RunConfig& c) {
  validate_config(c);
  InitialDatum datum = make_datum(c.datum);
  SupportEnvelope env = support_envelope(datum);
  double T = c.horizon ? *c.horizon : c.horizon_fraction * env.a;
  if (!std::isfinite(T)) throw ConfigError("T", "no finite default horizon (blow-up time is infinite); set T");
  if (T >= env.a && !c.override_horizon) throw HorizonError(T, env.a);
  double xt = env.X(std::min(T, env.a));
  double L = c.extent ? *c.extent : 2.5 * xt;
  GridSpec grid{L, c.nodes};
  if (T < env.a && !(L > 1.25 * xt))
    throw ConfigError("grid.L", "L = " + std::to_string(L) + " must exceed 1.25 X(T) = " + std::to_string(1.25 * xt));
  double dt = c.dt ? *c.dt : std::min(0.01, 0.1 * grid.spacing() / env.P(0.0));
  long steps = 0;
  if (T > 0.0) {
    double q = T / dt;
    double r = std::round(q);
    steps = (std::fabs(q - r) <= 1e-9 * std::max(1.0, q)) ? static_cast<long>(r) : static_cast<long>(std::ceil(q));
    // records stay uniformly spaced only if the last step lands on the cadence
    const long cad = std::max(c.cadence, 1);
    steps = std::max((steps + cad - 1) / cad * cad, cad);
    dt = T / static_cast<double>(steps);
  }
  return RunSetup{datum, env, T, grid, dt, steps};
}

}  // namespace rvprd
