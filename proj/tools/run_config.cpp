#include "run_config.hpp"

#include "dicke/errors.hpp"

#include <cmath>
#include <initializer_list>
#include <set>

namespace dicke::cli {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
  if (!obj.is_object()) throw ValidationError("config: '" + path + "' must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.count(item.key())) {
      throw ValidationError("config: unknown key '" + path + (path.empty() ? "" : ".") +
                            item.key() + "'");
    }
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError("config: '" + path + "' must be a number");
  return v.get<double>();
}

long long get_integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 1e15) return static_cast<long long>(d);
  }
  throw ValidationError("config: '" + path + "' must be an integer");
}

void read(const json& obj, const char* key, const std::string& path, double& out) {
  if (const json* v = find(obj, key)) out = get_number(*v, path + "." + key);
}

void read(const json& obj, const char* key, const std::string& path, std::optional<double>& out) {
  if (const json* v = find(obj, key)) out = get_number(*v, path + "." + key);
}

void read(const json& obj, const char* key, const std::string& path, int& out) {
  if (const json* v = find(obj, key)) out = static_cast<int>(get_integer(*v, path + "." + key));
}

void read_count(const json& obj, const char* key, const std::string& path, std::size_t& out) {
  if (const json* v = find(obj, key)) {
    const long long n = get_integer(*v, path + "." + key);
    if (n < 1) throw ValidationError("config: '" + path + "." + key + "' must be >= 1");
    out = static_cast<std::size_t>(n);
  }
}

GridSpec parse_grid(const json& v, const std::string& path) {
  GridSpec grid;
  if (v.is_array()) {
    for (const json& x : v) grid.values.push_back(get_number(x, path));
    return grid;
  }
  check_keys(v, {"values", "min", "max", "points", "scale"}, path);
  if (const json* values = find(v, "values")) {
    if (find(v, "min") || find(v, "max") || find(v, "points")) {
      throw ValidationError("config: '" + path + "' mixes values with min/max/points");
    }
    if (!values->is_array()) throw ValidationError("config: '" + path + ".values' must be a list");
    for (const json& x : *values) grid.values.push_back(get_number(x, path + ".values"));
    return grid;
  }
  const json* lo = find(v, "min");
  const json* hi = find(v, "max");
  const json* points = find(v, "points");
  if (!lo || !hi || !points) {
    throw ValidationError("config: '" + path + "' needs values or min, max and points");
  }
  const double a = get_number(*lo, path + ".min");
  const double b = get_number(*hi, path + ".max");
  const long long n = get_integer(*points, path + ".points");
  std::string scale = "linear";
  if (const json* s = find(v, "scale")) {
    if (!s->is_string()) throw ValidationError("config: '" + path + ".scale' must be a string");
    scale = s->get<std::string>();
  }
  if (n < 0) throw ValidationError("config: '" + path + ".points' must be >= 0");
  if (scale != "linear" && scale != "log") {
    throw ValidationError("config: '" + path + ".scale' must be linear or log");
  }
  if (scale == "log" && !(a > 0.0 && b > 0.0)) {
    throw ValidationError("config: '" + path + "' log grid needs positive bounds");
  }
  for (long long i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    grid.values.push_back(scale == "linear" ? a + (b - a) * f
                                            : std::exp(std::log(a) + (std::log(b) - std::log(a)) * f));
  }
  if (n > 1) grid.values.back() = b;
  return grid;
}

GridSpec linear_grid(double a, double b, int n) {
  GridSpec g;
  for (int i = 0; i < n; ++i) g.values.push_back(a + (b - a) * i / (n - 1));
  return g;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ProtocolConfig RunConfig::protocol_config() const {
  ProtocolConfig c;
  c.params = physics;
  c.ramp = ramp;
  c.xi = xi;
  c.margin = margin;
  c.readout_dressing = readout_dressing;
  c.engine = engine;
  c.fock = fock;
  c.propagation = propagation;
  c.samples = samples;
  return c;
}

RunConfig parse_run_config(const json& doc) {
  RunConfig c;
  c.spectrum.omega_x = linear_grid(0.0, 4.0, 41);
  c.demkov.x.values = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0};
  c.demkov.ratio.values = {-10.0, -5.0, -1.0, 0.0, 1.0, 5.0, 10.0};

  if (doc.is_null()) return c;
  check_keys(doc, {"physics", "ramp", "protocol", "fock", "propagation", "spectrum", "gap",
                   "sweep", "demkov", "workers"},
             "");

  if (const json* s = find(doc, "physics")) {
    check_keys(*s, {"n_atoms", "omega", "omega_x", "delta", "g"}, "physics");
    read(*s, "n_atoms", "physics", c.physics.n_atoms);
    read(*s, "omega", "physics", c.physics.omega);
    read(*s, "omega_x", "physics", c.physics.omega_x);
    read(*s, "delta", "physics", c.physics.delta);
    read(*s, "g", "physics", c.physics.g);
  }
  if (const json* s = find(doc, "ramp")) {
    check_keys(*s, {"omega_x_0", "omega_x_i_ratio", "gamma", "tau1", "tau1_gap_factor", "t_f"},
               "ramp");
    read(*s, "omega_x_0", "ramp", c.ramp.omega_x_0);
    read(*s, "omega_x_i_ratio", "ramp", c.ramp.omega_x_i_ratio);
    read(*s, "gamma", "ramp", c.ramp.gamma);
    read(*s, "tau1", "ramp", c.ramp.tau1);
    read(*s, "tau1_gap_factor", "ramp", c.ramp.tau1_gap_factor);
    read(*s, "t_f", "ramp", c.ramp.t_f);
  }
  if (const json* s = find(doc, "protocol")) {
    check_keys(*s, {"xi", "margin", "readout_dressing", "engine", "samples", "enforce_conditions"},
               "protocol");
    read(*s, "xi", "protocol", c.xi);
    read(*s, "margin", "protocol", c.margin);
    read(*s, "readout_dressing", "protocol", c.readout_dressing);
    if (const json* e = find(*s, "engine")) {
      if (!e->is_string()) throw ValidationError("config: 'protocol.engine' must be a string");
      c.engine = engine_from_string(e->get<std::string>());
    }
    read_count(*s, "samples", "protocol", c.samples);
    if (const json* e = find(*s, "enforce_conditions")) {
      if (!e->is_boolean()) {
        throw ValidationError("config: 'protocol.enforce_conditions' must be a boolean");
      }
      c.enforce_conditions = e->get<bool>();
    }
  }
  if (const json* s = find(doc, "fock")) {
    check_keys(*s, {"fixed_cutoff", "tolerance", "max_dim"}, "fock");
    if (const json* v = find(*s, "fixed_cutoff")) {
      c.fock.fixed_cutoff = static_cast<int>(get_integer(*v, "fock.fixed_cutoff"));
    }
    read(*s, "tolerance", "fock", c.fock.tolerance);
    if (const json* v = find(*s, "max_dim")) c.fock.max_dim = get_integer(*v, "fock.max_dim");
  }
  if (const json* s = find(doc, "propagation")) {
    check_keys(*s, {"rtol", "atol", "fixed_step", "max_step", "truncation_threshold"},
               "propagation");
    read(*s, "rtol", "propagation", c.propagation.rtol);
    read(*s, "atol", "propagation", c.propagation.atol);
    read(*s, "fixed_step", "propagation", c.propagation.fixed_step);
    read(*s, "max_step", "propagation", c.propagation.max_step);
    read(*s, "truncation_threshold", "propagation", c.propagation.truncation_threshold);
  }
  if (const json* s = find(doc, "spectrum")) {
    check_keys(*s, {"omega_x", "levels"}, "spectrum");
    if (const json* g = find(*s, "omega_x")) c.spectrum.omega_x = parse_grid(*g, "spectrum.omega_x");
    read(*s, "levels", "spectrum", c.spectrum.levels);
  }
  if (const json* s = find(doc, "gap")) {
    check_keys(*s, {"n_atoms", "omega", "omega_x"}, "gap");
    if (const json* g = find(*s, "n_atoms")) c.gap.n_atoms = parse_grid(*g, "gap.n_atoms");
    if (const json* g = find(*s, "omega")) c.gap.omega = parse_grid(*g, "gap.omega");
    if (const json* g = find(*s, "omega_x")) c.gap.omega_x = parse_grid(*g, "gap.omega_x");
  }
  if (const json* s = find(doc, "sweep")) {
    check_keys(*s, {"parameter", "grid"}, "sweep");
    SweepSection sweep;
    const json* p = find(*s, "parameter");
    const json* g = find(*s, "grid");
    if (!p || !p->is_string() || !g) {
      throw ValidationError("config: 'sweep' needs a parameter name and a grid");
    }
    sweep.parameter = sweep_parameter_from_string(p->get<std::string>());
    sweep.grid = parse_grid(*g, "sweep.grid");
    c.sweep = sweep;
  }
  if (const json* s = find(doc, "demkov")) {
    check_keys(*s, {"x", "ratio", "gamma", "n_atoms", "t_end_gamma", "samples"}, "demkov");
    if (const json* g = find(*s, "x")) c.demkov.x = parse_grid(*g, "demkov.x");
    if (const json* g = find(*s, "ratio")) c.demkov.ratio = parse_grid(*g, "demkov.ratio");
    read(*s, "gamma", "demkov", c.demkov.gamma);
    read(*s, "n_atoms", "demkov", c.demkov.n_atoms);
    read(*s, "t_end_gamma", "demkov", c.demkov.t_end_gamma);
    read_count(*s, "samples", "demkov", c.demkov.samples);
  }
  if (const json* v = find(doc, "workers")) {
    const long long w = get_integer(*v, "workers");
    if (w < 1) throw ValidationError("config: 'workers' must be >= 1");
    c.workers = static_cast<unsigned>(w);
  }

  c.physics.validate();
  if (c.spectrum.levels < 1) throw ValidationError("config: 'spectrum.levels' must be >= 1");
  if (c.fock.max_dim < 1) throw ValidationError("config: 'fock.max_dim' must be >= 1");
  if (!(c.fock.tolerance > 0.0)) throw ValidationError("config: 'fock.tolerance' must be > 0");
  if (!(c.propagation.rtol > 0.0) || !(c.propagation.atol > 0.0)) {
    throw ValidationError("config: propagation tolerances must be > 0");
  }
  if (!(c.demkov.gamma > 0.0) || c.demkov.n_atoms < 1 || !(c.demkov.t_end_gamma >= 0.0)) {
    throw ValidationError("config: demkov section needs gamma > 0, n_atoms >= 1, t_end_gamma >= 0");
  }
  return c;
}

RunConfig parse_run_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
  auto grid = [](const GridSpec& g) { return json{{"values", g.values}}; };
  json out;
  out["physics"] = {{"n_atoms", c.physics.n_atoms},
                    {"omega", c.physics.omega},
                    {"omega_x", c.physics.omega_x},
                    {"delta", c.physics.delta},
                    {"g", c.physics.g}};
  out["ramp"] = {{"omega_x_0", c.ramp.omega_x_0},
                 {"omega_x_i_ratio", c.ramp.omega_x_i_ratio},
                 {"gamma", c.ramp.gamma},
                 {"tau1", optional_json(c.ramp.tau1)},
                 {"tau1_gap_factor", c.ramp.tau1_gap_factor},
                 {"t_f", optional_json(c.ramp.t_f)}};
  out["protocol"] = {{"xi", c.xi},
                     {"margin", c.margin},
                     {"readout_dressing", c.readout_dressing},
                     {"engine", to_string(c.engine)},
                     {"samples", c.samples},
                     {"enforce_conditions", c.enforce_conditions}};
  out["fock"] = {{"fixed_cutoff", c.fock.fixed_cutoff ? json(*c.fock.fixed_cutoff) : json(nullptr)},
                 {"tolerance", c.fock.tolerance},
                 {"max_dim", c.fock.max_dim}};
  out["propagation"] = {{"rtol", c.propagation.rtol},
                        {"atol", c.propagation.atol},
                        {"fixed_step", optional_json(c.propagation.fixed_step)},
                        {"max_step", std::isfinite(c.propagation.max_step)
                                         ? json(c.propagation.max_step)
                                         : json(nullptr)},
                        {"truncation_threshold", c.propagation.truncation_threshold}};
  out["spectrum"] = {{"omega_x", grid(c.spectrum.omega_x)}, {"levels", c.spectrum.levels}};
  json gap = json::object();
  if (c.gap.n_atoms) gap["n_atoms"] = grid(*c.gap.n_atoms);
  if (c.gap.omega) gap["omega"] = grid(*c.gap.omega);
  if (c.gap.omega_x) gap["omega_x"] = grid(*c.gap.omega_x);
  out["gap"] = gap;
  if (c.sweep) {
    out["sweep"] = {{"parameter", to_string(c.sweep->parameter)}, {"grid", grid(c.sweep->grid)}};
  }
  out["demkov"] = {{"x", grid(c.demkov.x)},
                   {"ratio", grid(c.demkov.ratio)},
                   {"gamma", c.demkov.gamma},
                   {"n_atoms", c.demkov.n_atoms},
                   {"t_end_gamma", c.demkov.t_end_gamma},
                   {"samples", c.demkov.samples}};
  out["workers"] = c.workers;
  return out;
}

}  // namespace dicke::cli
