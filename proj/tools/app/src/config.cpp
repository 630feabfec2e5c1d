#include "optomech_app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace optomech::app {
namespace {

using nlohmann::json;

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(join(path, key), "unknown field");
    }
  }
}

const json& section(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing field");
  const json& s = obj.at(key);
  if (!s.is_object()) throw ConfigError(join(path, key), "expected an object");
  return s;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing field");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  return obj.contains(key) ? number(obj, key, path) : fallback;
}

int integer(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing field");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<int>();
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing field");
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

const std::set<std::string> kFormats{"csv", "json", "svg"};

std::vector<std::string> check_formats(std::vector<std::string> formats, const std::string& field) {
  if (formats.empty()) throw ConfigError(field, "at least one output format is needed");
  for (const auto& f : formats) {
    if (!kFormats.contains(f)) throw ConfigError(field, "unknown format '" + f + "' (choose from csv, json, svg)");
  }
  std::sort(formats.begin(), formats.end());
  formats.erase(std::unique(formats.begin(), formats.end()), formats.end());
  return formats;
}

template <typename F>
void rethrow_as_config(const std::string& field, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

SweepModel RunConfig::sweep_model() const {
  if (model == ModelKind::Effective) return effective;
  return full;
}

ModeBasis RunConfig::mode_basis() const {
  if (trajectory && trajectory->mode_basis) return *trajectory->mode_basis;
  return model == ModelKind::Effective ? ModeBasis::Normal : ModeBasis::Bare;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(doc, "", {"model", "params", "layout", "dissipation", "sweep", "trajectory", "g2", "observables",
                           "output", "workers"});
  RunConfig c;

  const std::string model = text(doc, "model", "");
  if (model == "effective") {
    c.model = ModelKind::Effective;
  } else if (model == "full") {
    c.model = ModelKind::Full;
  } else {
    throw ConfigError("model", "expected \"effective\" or \"full\", got \"" + model + "\"");
  }

  const json& p = section(doc, "params", "");
  if (c.model == ModelKind::Effective) {
    reject_unknown(p, "params", {"omega", "omega1", "omega2", "k1", "k2", "j"});
    c.effective = {number(p, "omega", "params"), number(p, "omega1", "params"), number(p, "omega2", "params"),
                   number(p, "k1", "params"),    number(p, "k2", "params"),     number(p, "j", "params")};
    rethrow_as_config("params", [&] { c.effective.validate(); });
  } else {
    reject_unknown(p, "params", {"omega", "omega1", "omega2", "lambda1", "lambda2", "j"});
    c.full = {number(p, "omega", "params"),   number(p, "omega1", "params"), number(p, "omega2", "params"),
              number(p, "lambda1", "params"), number(p, "lambda2", "params"), number(p, "j", "params")};
    rethrow_as_config("params", [&] { c.full.validate(); });
  }

  const json& l = section(doc, "layout", "");
  reject_unknown(l, "layout", {"n1", "n2"});
  c.n1 = integer(l, "n1", "layout");
  c.n2 = integer(l, "n2", "layout");
  rethrow_as_config("layout", [&] { (void)c.layout(); });

  if (doc.contains("dissipation")) {
    const json& d = section(doc, "dissipation", "");
    reject_unknown(d, "dissipation", {"kappa1", "kappa2", "gamma", "gamma_phi", "n_th"});
    c.dissipation = DissipationParams{number(d, "kappa1", "dissipation"), number(d, "kappa2", "dissipation"),
                                      number(d, "gamma", "dissipation"), number(d, "gamma_phi", "dissipation"),
                                      number(d, "n_th", "dissipation")};
    rethrow_as_config("dissipation", [&] { c.dissipation->validate(); });
  }

  if (doc.contains("sweep")) {
    const json& s = section(doc, "sweep", "");
    reject_unknown(s, "sweep", {"delta_lo", "delta_hi", "points", "m_levels", "min_prominence"});
    SweepSpec spec;
    spec.range = {number(s, "delta_lo", "sweep"), number(s, "delta_hi", "sweep"), integer(s, "points", "sweep")};
    spec.m_levels = integer(s, "m_levels", "sweep");
    spec.min_prominence = number_or(s, "min_prominence", "sweep", spec.min_prominence);
    if (spec.range.points < 2) throw ConfigError("sweep.points", "need at least 2 grid points");
    if (!(spec.range.hi > spec.range.lo)) throw ConfigError("sweep.delta_hi", "must exceed delta_lo");
    if (spec.m_levels < 1) throw ConfigError("sweep.m_levels", "must be positive");
    if (spec.min_prominence < 0.0) throw ConfigError("sweep.min_prominence", "must be non-negative");
    c.sweep = spec;
  }

  if (doc.contains("trajectory")) {
    const json& t = section(doc, "trajectory", "");
    reject_unknown(t, "trajectory", {"t_max", "points", "n_init", "qubit", "mode_basis", "check_convergence"});
    TrajectorySpec spec;
    spec.t_max = number(t, "t_max", "trajectory");
    spec.points = integer(t, "points", "trajectory");
    spec.n_init = number(t, "n_init", "trajectory");
    const std::string qubit = text(t, "qubit", "trajectory");
    if (qubit == "excited") {
      spec.qubit = QubitLevel::Excited;
    } else if (qubit == "ground") {
      spec.qubit = QubitLevel::Ground;
    } else {
      throw ConfigError("trajectory.qubit", "expected \"excited\" or \"ground\"");
    }
    if (t.contains("mode_basis")) {
      const std::string basis = text(t, "mode_basis", "trajectory");
      if (basis == "normal") {
        spec.mode_basis = ModeBasis::Normal;
      } else if (basis == "bare") {
        spec.mode_basis = ModeBasis::Bare;
      } else {
        throw ConfigError("trajectory.mode_basis", "expected \"normal\" or \"bare\"");
      }
    }
    if (t.contains("check_convergence")) {
      if (!t.at("check_convergence").is_boolean()) {
        throw ConfigError("trajectory.check_convergence", "expected true or false");
      }
      spec.check_convergence = t.at("check_convergence").get<bool>();
    }
    if (spec.n_init < 0.0) throw ConfigError("trajectory.n_init", "must be non-negative");
    c.trajectory = spec;
  }

  if (doc.contains("g2")) {
    const json& g = section(doc, "g2", "");
    reject_unknown(g, "g2", {"tau_max", "points"});
    c.g2 = G2Spec{number(g, "tau_max", "g2"), integer(g, "points", "g2")};
  }

  if (doc.contains("observables")) {
    const json& o = doc.at("observables");
    if (!o.is_array()) throw ConfigError("observables", "expected a list of labels");
    for (const auto& v : o) {
      if (!v.is_string()) throw ConfigError("observables", "labels must be strings");
      c.observables.push_back(v.get<std::string>());
    }
  }

  if (doc.contains("output")) {
    const json& o = section(doc, "output", "");
    reject_unknown(o, "output", {"dir", "formats"});
    if (o.contains("dir")) c.output.dir = text(o, "dir", "output");
    if (o.contains("formats")) {
      const json& f = o.at("formats");
      if (!f.is_array()) throw ConfigError("output.formats", "expected a list");
      std::vector<std::string> formats;
      for (const auto& v : f) {
        if (!v.is_string()) throw ConfigError("output.formats", "formats must be strings");
        formats.push_back(v.get<std::string>());
      }
      c.output.formats = check_formats(std::move(formats), "output.formats");
    }
  }

  if (doc.contains("workers")) {
    c.workers = integer(doc, "workers", "");
    if (c.workers < 0) throw ConfigError("workers", "must be non-negative");
  }
  return c;
}

json to_json(const RunConfig& c) {
  json doc;
  if (c.model == ModelKind::Effective) {
    doc["model"] = "effective";
    const auto& p = c.effective;
    doc["params"] = {{"omega", p.omega}, {"omega1", p.omega1}, {"omega2", p.omega2},
                     {"k1", p.k1},       {"k2", p.k2},         {"j", p.j_coupling}};
  } else {
    doc["model"] = "full";
    const auto& p = c.full;
    doc["params"] = {{"omega", p.omega},     {"omega1", p.omega1},   {"omega2", p.omega2},
                     {"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"j", p.j_coupling}};
  }
  doc["layout"] = {{"n1", c.n1}, {"n2", c.n2}};
  if (c.dissipation) {
    const auto& d = *c.dissipation;
    doc["dissipation"] = {{"kappa1", d.kappa1}, {"kappa2", d.kappa2}, {"gamma", d.gamma},
                          {"gamma_phi", d.gamma_phi}, {"n_th", d.n_th}};
  }
  if (c.sweep) {
    const auto& s = *c.sweep;
    doc["sweep"] = {{"delta_lo", s.range.lo},   {"delta_hi", s.range.hi},
                    {"points", s.range.points}, {"m_levels", s.m_levels},
                    {"min_prominence", s.min_prominence}};
  }
  if (c.trajectory) {
    const auto& t = *c.trajectory;
    doc["trajectory"] = {{"t_max", t.t_max},
                         {"points", t.points},
                         {"n_init", t.n_init},
                         {"qubit", t.qubit == QubitLevel::Excited ? "excited" : "ground"},
                         {"mode_basis", c.mode_basis() == ModeBasis::Normal ? "normal" : "bare"},
                         {"check_convergence", t.check_convergence}};
  }
  if (c.g2) doc["g2"] = {{"tau_max", c.g2->tau_max}, {"points", c.g2->points}};
  if (!c.observables.empty()) doc["observables"] = c.observables;
  doc["output"] = {{"dir", c.output.dir}, {"formats", c.output.formats}};
  doc["workers"] = c.workers;
  return doc;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "malformed JSON in '" + path + "': " + e.what());
  }
}

void apply_overrides(RunConfig& c, const Overrides& o, Command command) {
  if (o.n1) c.n1 = *o.n1;
  if (o.n2) c.n2 = *o.n2;
  rethrow_as_config("layout", [&] { (void)c.layout(); });
  if (o.workers) {
    if (*o.workers < 0) throw ConfigError("workers", "must be non-negative");
    c.workers = *o.workers;
  }
  if (o.m_levels || o.delta) {
    if (!c.sweep) c.sweep = SweepSpec{};
    if (o.m_levels) {
      if (*o.m_levels < 1) throw ConfigError("sweep.m_levels", "must be positive");
      c.sweep->m_levels = *o.m_levels;
    }
    if (o.delta) c.sweep->range = *o.delta;
  }
  if (o.t_max || o.t_points) {
    if (command == Command::G2) {
      if (!c.g2) c.g2 = G2Spec{};
      if (o.t_max) c.g2->tau_max = *o.t_max;
      if (o.t_points) c.g2->points = *o.t_points;
    } else if (command == Command::Evolve) {
      if (!c.trajectory) throw ConfigError("trajectory", "missing field (needed by --tmax/--tpoints)");
      if (o.t_max) c.trajectory->t_max = *o.t_max;
      if (o.t_points) c.trajectory->points = *o.t_points;
    }
  }
  if (o.out_dir) c.output.dir = *o.out_dir;
  if (o.formats) c.output.formats = check_formats(*o.formats, "--format");
}

void require_sections(const RunConfig& c, Command command) {
  auto check_grid = [](double t_max, int points, const std::string& field) {
    if (!(t_max >= 0.0)) throw ConfigError(field, "horizon must be non-negative");
    if (points < 1) throw ConfigError(field, "need at least 1 output point");
    if (t_max > 0.0 && points < 2) throw ConfigError(field, "need at least 2 output points");
  };
  switch (command) {
    case Command::Spectrum:
      if (!c.sweep) throw ConfigError("sweep", "missing field");
      if (c.sweep->m_levels > 2 * c.n1 * c.n2) throw ConfigError("sweep.m_levels", "exceeds the Hilbert-space size");
      break;
    case Command::Evolve:
      if (!c.dissipation) throw ConfigError("dissipation", "missing field");
      if (!c.trajectory) throw ConfigError("trajectory", "missing field");
      check_grid(c.trajectory->t_max, c.trajectory->points, "trajectory");
      break;
    case Command::G2:
      if (!c.dissipation) throw ConfigError("dissipation", "missing field");
      if (!c.g2) throw ConfigError("g2", "missing field");
      check_grid(c.g2->tau_max, c.g2->points, "g2");
      break;
  }
}

DeltaRange parse_delta_range(const std::string& s) {
  const auto first = s.find(':');
  const auto second = first == std::string::npos ? std::string::npos : s.find(':', first + 1);
  if (second == std::string::npos) throw ConfigError("--delta", "expected lo:hi:n, got '" + s + "'");
  auto to_double = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || !std::isfinite(v)) {
      throw ConfigError("--delta", "'" + part + "' is not a number");
    }
    return v;
  };
  DeltaRange r;
  r.lo = to_double(s.substr(0, first));
  r.hi = to_double(s.substr(first + 1, second - first - 1));
  const std::string n = s.substr(second + 1);
  const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), r.points);
  if (ec != std::errc() || ptr != n.data() + n.size()) throw ConfigError("--delta", "'" + n + "' is not an integer");
  if (r.points < 2) throw ConfigError("--delta", "need at least 2 grid points");
  if (!(r.hi > r.lo)) throw ConfigError("--delta", "hi must exceed lo");
  return r;
}

std::vector<std::string> parse_formats(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return check_formats(std::move(out), "--format");
}

std::vector<double> uniform_grid(double t_max, int points) {
  if (t_max == 0.0) return {0.0};
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = t_max * i / (points - 1);
  grid.back() = t_max;
  return grid;
}

}  // namespace optomech::app
