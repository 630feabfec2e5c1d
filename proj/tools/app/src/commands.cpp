#include "optomech_app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "optomech/dynamics.hpp"
#include "optomech/models.hpp"
#include "optomech/observables.hpp"
#include "optomech/version.hpp"
#include "optomech_app/presets.hpp"

namespace optomech::app {
namespace {

using nlohmann::json;

OperatorMatrix hamiltonian_for(const RunConfig& c, const FockSpaceLayout& layout) {
  if (c.model == ModelKind::Effective) {
    return build_effective_hamiltonian(c.effective, layout, {CouplingGuard::AllowZero});
  }
  return build_full_hamiltonian(c.full, layout);
}

constexpr int kPositivityCheckpoints = 20;

TrajectoryRecord trajectory_at(const RunConfig& c, const FockSpaceLayout& layout) {
  const TrajectorySpec& spec = *c.trajectory;
  const LiouvillianOp l = build_liouvillian(hamiltonian_for(c, layout), *c.dissipation, layout, c.mode_basis());
  const DensityState rho0 = thermal_state(layout, spec.n_init, spec.qubit);
  IntegratorOptions options;
  options.positivity_checkpoints = kPositivityCheckpoints;
  TrajectoryRecord record =
      evolve(rho0, l, uniform_grid(spec.t_max, spec.points), standard_observables(layout), options);
  add_derived_series(record);
  return record;
}

bool selected(const RunConfig& c, const std::string& label) {
  return c.observables.empty() || std::find(c.observables.begin(), c.observables.end(), label) != c.observables.end();
}

// Output location and thread count do not change results, so they stay out
// of the echo and runs differing only in those are byte-identical.
json parameter_echo(const RunConfig& config) {
  json doc = to_json(config);
  doc.erase("output");
  doc.erase("workers");
  return doc;
}

json metadata_json(const std::string& command, const RunConfig& config) {
  return {{"tool", "optomech"}, {"version", kVersion}, {"command", command}, {"config", parameter_echo(config)}};
}

std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  return std::filesystem::path(c.output.dir) / name;
}

}  // namespace

std::vector<std::string> metadata_lines(const std::string& command, const RunConfig& config) {
  return {std::string("optomech ") + kVersion, "command " + command, "config " + parameter_echo(config).dump()};
}

SpectrumOutcome run_spectrum(const RunConfig& config) {
  require_sections(config, Command::Spectrum);
  SweepOptions options;
  options.workers = config.workers;
  SpectrumOutcome out;
  out.sweep = sweep_delta(config.sweep_model(), config.sweep->range, config.sweep->m_levels, config.layout(), options);
  AnticrossingOptions ac;
  ac.min_prominence = config.sweep->min_prominence;
  out.anticrossings = find_avoided_crossings(out.sweep, ac);
  out.minimum_gaps = minimum_gaps(out.sweep);
  return out;
}

std::vector<std::string> trajectory_labels() {
  return {"x_plus_1", "x_plus_2", "alpha_1_expect", "alpha_2_expect", "n_1", "n_2", "pair_1", "pair_2",
          "g2_c",     "g2_d",     "z_c",            "z_d",            "z_c_number", "z_d_number"};
}

ConvergenceReport compare_records(const TrajectoryRecord& base, const TrajectoryRecord& refined, int n1, int n2) {
  if (base.times != refined.times) throw DimensionMismatch("records to compare have different time grids");
  ConvergenceReport report;
  report.n1 = n1;
  report.n2 = n2;
  for (const auto& label : base.labels()) {
    if (!refined.has(label)) continue;
    const auto& a = base.series(label);
    const auto& b = refined.series(label);
    double drift = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::isnan(a[i].real()) || std::isnan(b[i].real())) continue;
      drift = std::max(drift, std::abs(a[i] - b[i]));
    }
    report.drift.emplace_back(label, drift);
    if (report.worst_series.empty() || drift > report.max_drift) {
      report.max_drift = drift;
      report.worst_series = label;
    }
  }
  report.converged = report.max_drift <= ConvergenceReport::kTolerance;
  return report;
}

EvolveOutcome run_evolve(const RunConfig& config) {
  require_sections(config, Command::Evolve);
  const auto known = trajectory_labels();
  for (const auto& label : config.observables) {
    if (std::find(known.begin(), known.end(), label) == known.end()) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError("observables", "unknown label '" + label + "' (available: " + list + ")");
    }
  }

  EvolveOutcome out;
  if (!config.trajectory->check_convergence) {
    out.record = trajectory_at(config, config.layout());
    return out;
  }
  const FockSpaceLayout refined(config.n1 + 2, config.n2 + 2);
  if (config.workers == 1) {
    out.record = trajectory_at(config, config.layout());
    const TrajectoryRecord larger = trajectory_at(config, refined);
    out.convergence = compare_records(out.record, larger, refined.n1(), refined.n2());
  } else {
    auto larger = std::async(std::launch::async, [&] { return trajectory_at(config, refined); });
    out.record = trajectory_at(config, config.layout());
    out.convergence = compare_records(out.record, larger.get(), refined.n1(), refined.n2());
  }
  return out;
}

G2Outcome run_g2(const RunConfig& config) {
  require_sections(config, Command::G2);
  const FockSpaceLayout layout = config.layout();
  const LiouvillianOp l = build_liouvillian(hamiltonian_for(config, layout), *config.dissipation, layout,
                                            config.mode_basis());
  const DensityState rho_ss = steady_state(l);
  G2Outcome out;
  out.tau = uniform_grid(config.g2->tau_max, config.g2->points);
  auto run = [&](CoherenceMode mode) { return g2_two_time(rho_ss, l, mode, out.tau); };
  if (config.workers == 1) {
    out.g2_c = run(CoherenceMode::Cavity);
    out.g2_d = run(CoherenceMode::Drive);
  } else {
    auto drive = std::async(std::launch::async, run, CoherenceMode::Drive);
    out.g2_c = run(CoherenceMode::Cavity);
    out.g2_d = drive.get();
  }
  out.g2_c_equal_time = g2_equal_time(rho_ss, layout, CoherenceMode::Cavity);
  out.g2_d_equal_time = g2_equal_time(rho_ss, layout, CoherenceMode::Drive);
  return out;
}

CsvTable spectrum_table(const SpectrumOutcome& outcome, const RunConfig& config) {
  CsvTable table;
  table.metadata = metadata_lines("spectrum", config);
  table.add_column("delta", outcome.sweep.delta_grid);
  for (int i = 0; i < outcome.sweep.level_count(); ++i) {
    std::vector<double> level;
    level.reserve(outcome.sweep.levels.size());
    for (const auto& row : outcome.sweep.levels) level.push_back(row[static_cast<std::size_t>(i)]);
    table.add_column("E" + std::to_string(i), level);
  }
  return table;
}

CsvTable anticrossing_table(const SpectrumOutcome& outcome, const RunConfig& config) {
  CsvTable table;
  table.metadata = metadata_lines("spectrum", config);
  std::vector<std::string> pair;
  std::vector<double> delta_star, gap;
  for (const auto& r : outcome.anticrossings) {
    pair.push_back(std::to_string(r.level_pair.first) + "-" + std::to_string(r.level_pair.second));
    delta_star.push_back(r.delta_star);
    gap.push_back(r.gap);
  }
  table.add_text_column("level_pair", std::move(pair));
  table.add_column("delta_star", delta_star);
  table.add_column("gap", gap);
  return table;
}

CsvTable trajectory_table(const EvolveOutcome& outcome, const RunConfig& config) {
  const TrajectoryRecord& record = outcome.record;
  CsvTable table;
  table.metadata = metadata_lines("evolve", config);
  table.metadata.push_back("steps accepted " + std::to_string(record.steps_accepted) + " rejected " +
                           std::to_string(record.steps_rejected));
  if (outcome.convergence) {
    const auto& c = *outcome.convergence;
    table.metadata.push_back("convergence n1 " + std::to_string(c.n1) + " n2 " + std::to_string(c.n2) +
                             " max_drift " + format_number(c.max_drift) + " worst " + c.worst_series + " " +
                             (c.converged ? "converged" : "NOT converged"));
  }
  table.add_column("time", record.times);
  for (const auto& label : record.labels()) {
    if (!selected(config, label)) continue;
    if (record.kind(label) == SeriesKind::Real) {
      table.add_column(label, record.real_series(label));
    } else {
      const auto& values = record.series(label);
      std::vector<double> re(values.size()), im(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
      }
      table.add_column(label + "_re", re);
      table.add_column(label + "_im", im);
    }
  }
  return table;
}

CsvTable g2_table(const G2Outcome& outcome, const RunConfig& config) {
  CsvTable table;
  table.metadata = metadata_lines("g2", config);
  auto echo = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("undefined"); };
  table.metadata.push_back("steady_state g2_c " + echo(outcome.g2_c_equal_time) + " g2_d " +
                           echo(outcome.g2_d_equal_time));
  table.add_column("tau", outcome.tau);
  table.add_column("g2_c", outcome.g2_c);
  table.add_column("g2_d", outcome.g2_d);
  return table;
}

std::vector<std::filesystem::path> write_spectrum(const SpectrumOutcome& outcome, const RunConfig& config) {
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    written.push_back(out_path(config, name));
    write_atomic(written.back(), content);
  };
  if (config.wants("csv")) {
    put("spectrum.csv", spectrum_table(outcome, config).render());
    put("anticrossings.csv", anticrossing_table(outcome, config).render());
  }
  if (config.wants("json")) {
    json doc;
    doc["metadata"] = metadata_json("spectrum", config);
    doc["delta"] = outcome.sweep.delta_grid;
    doc["levels"] = outcome.sweep.levels;
    doc["minimum_gaps"] = outcome.minimum_gaps;
    doc["anticrossings"] = json::array();
    for (const auto& r : outcome.anticrossings) {
      doc["anticrossings"].push_back({{"level_pair", {r.level_pair.first, r.level_pair.second}},
                                      {"delta_star", r.delta_star},
                                      {"gap", r.gap},
                                      {"prominence", r.prominence}});
    }
    put("spectrum.json", render_json(doc));
  }
  if (config.wants("svg")) {
    PlotPanel panel{"lowest levels", "Delta", "E", {}};
    for (int i = 0; i < outcome.sweep.level_count(); ++i) {
      std::vector<double> level;
      for (const auto& row : outcome.sweep.levels) level.push_back(row[static_cast<std::size_t>(i)]);
      panel.series.push_back({"E" + std::to_string(i), outcome.sweep.delta_grid, std::move(level)});
    }
    put("spectrum.svg", render_svg("Energy levels against detuning", {panel}));
  }
  return written;
}

std::vector<std::filesystem::path> write_evolve(const EvolveOutcome& outcome, const RunConfig& config) {
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    written.push_back(out_path(config, name));
    write_atomic(written.back(), content);
  };
  const TrajectoryRecord& record = outcome.record;
  if (config.wants("csv")) put("trajectory.csv", trajectory_table(outcome, config).render());
  if (config.wants("json")) {
    json doc;
    doc["metadata"] = metadata_json("evolve", config);
    doc["times"] = record.times;
    doc["series"] = json::object();
    for (const auto& label : record.labels()) {
      if (!selected(config, label)) continue;
      if (record.kind(label) == SeriesKind::Real) {
        doc["series"][label] = record.real_series(label);
      } else {
        std::vector<double> re, im;
        for (const auto& v : record.series(label)) {
          re.push_back(v.real());
          im.push_back(v.imag());
        }
        doc["series"][label] = {{"re", re}, {"im", im}};
      }
    }
    doc["diagnostics"] = json::array();
    for (const auto& d : record.diagnostics) {
      doc["diagnostics"].push_back({{"time", d.time},
                                    {"trace_error", d.trace_error},
                                    {"hermiticity_error", d.hermiticity_error},
                                    {"min_eigenvalue", d.min_eigenvalue}});
    }
    doc["steps"] = {{"accepted", record.steps_accepted}, {"rejected", record.steps_rejected}};
    if (outcome.convergence) {
      const auto& c = *outcome.convergence;
      json drift = json::object();
      for (const auto& [label, value] : c.drift) drift[label] = value;
      doc["convergence"] = {{"n1", c.n1},         {"n2", c.n2},       {"max_drift", c.max_drift},
                            {"worst_series", c.worst_series}, {"converged", c.converged}, {"drift", drift}};
    }
    put("trajectory.json", render_json(doc));
  }
  if (config.wants("svg")) {
    PlotPanel g2{"second-order coherence", "time", "g2", {}};
    PlotPanel z{"population imbalance", "time", "z", {}};
    for (const char* label : {"g2_c", "g2_d"}) g2.series.push_back({label, record.times, record.real_series(label)});
    for (const char* label : {"z_c", "z_d"}) z.series.push_back({label, record.times, record.real_series(label)});
    put("trajectory.svg", render_svg("Trajectory", {g2, z}));
  }
  return written;
}

std::vector<std::filesystem::path> write_g2(const G2Outcome& outcome, const RunConfig& config) {
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    written.push_back(out_path(config, name));
    write_atomic(written.back(), content);
  };
  if (config.wants("csv")) put("g2_two_time.csv", g2_table(outcome, config).render());
  if (config.wants("json")) {
    json doc;
    doc["metadata"] = metadata_json("g2", config);
    doc["tau"] = outcome.tau;
    doc["g2_c"] = outcome.g2_c;
    doc["g2_d"] = outcome.g2_d;
    doc["steady_state"] = {{"g2_c", outcome.g2_c_equal_time ? json(*outcome.g2_c_equal_time) : json()},
                           {"g2_d", outcome.g2_d_equal_time ? json(*outcome.g2_d_equal_time) : json()}};
    put("g2_two_time.json", render_json(doc));
  }
  if (config.wants("svg")) {
    PlotPanel panel{"two-time coherence from the steady state", "tau", "g2", {}};
    panel.series.push_back({"g2_c", outcome.tau, outcome.g2_c});
    panel.series.push_back({"g2_d", outcome.tau, outcome.g2_d});
    put("g2_two_time.svg", render_svg("Two-time g2", {panel}));
  }
  return written;
}

json list_presets() {
  json out = json::array();
  for (const auto& name : preset_names()) out.push_back({{"name", name}, {"config", preset_json(name)}});
  return out;
}

}  // namespace optomech::app
