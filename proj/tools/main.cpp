#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "optomech/errors.hpp"
#include "optomech/version.hpp"
#include "optomech_app/commands.hpp"
#include "optomech_app/config.hpp"
#include "optomech_app/presets.hpp"

namespace {

using nlohmann::json;
using namespace optomech;
using namespace optomech::app;

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

struct Flags {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::string formats;
  std::string delta;
  std::optional<int> n1, n2, workers, m_levels, t_points;
  std::optional<double> t_max;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--preset", f.preset, "built-in preset (see `optomech presets`)");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--format", f.formats, "comma-separated subset of csv,json,svg");
  cmd->add_option("--n1", f.n1, "cutoff of resonator 1");
  cmd->add_option("--n2", f.n2, "cutoff of resonator 2");
  cmd->add_option("--workers", f.workers, "worker threads (0 = all processors)");
  cmd->add_option("--m-levels", f.m_levels, "number of lowest levels");
  cmd->add_option("--delta", f.delta, "detuning grid lo:hi:n");
  cmd->add_option("--tmax", f.t_max, "time horizon (tau horizon for g2)");
  cmd->add_option("--tpoints", f.t_points, "number of output times");
}

RunConfig resolve(const Flags& f, Command command) {
  json doc;
  if (!f.preset.empty()) doc = preset_json(f.preset);
  if (!f.config_path.empty()) {
    if (doc.is_null()) {
      doc = load_json_file(f.config_path);
    } else {
      doc.merge_patch(load_json_file(f.config_path));
    }
  }
  if (doc.is_null()) throw ConfigError("config", "give --config PATH or --preset NAME");
  RunConfig config = parse_config(doc);

  Overrides o;
  o.n1 = f.n1;
  o.n2 = f.n2;
  o.workers = f.workers;
  o.m_levels = f.m_levels;
  if (!f.delta.empty()) o.delta = parse_delta_range(f.delta);
  o.t_max = f.t_max;
  o.t_points = f.t_points;
  if (!f.out_dir.empty()) o.out_dir = f.out_dir;
  if (!f.formats.empty()) o.formats = parse_formats(f.formats);
  apply_overrides(config, o, command);
  require_sections(config, command);
  return config;
}

json written_list(const std::vector<std::filesystem::path>& paths) {
  json out = json::array();
  for (const auto& p : paths) out.push_back(p.string());
  return out;
}

void report_error(const std::string& kind, const std::string& message, json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  std::cerr << extra.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit-cavity-mechanics spectra and open-system dynamics"};
  app.set_version_flag("--version", std::string("optomech ") + kVersion);
  app.require_subcommand(1);

  Flags spectrum_flags, evolve_flags, g2_flags;
  auto* spectrum = app.add_subcommand("spectrum", "lowest levels against detuning, with anticrossings");
  add_run_flags(spectrum, spectrum_flags);
  auto* evolve = app.add_subcommand("evolve", "master-equation trajectory with g2 and population imbalances");
  add_run_flags(evolve, evolve_flags);
  auto* g2 = app.add_subcommand("g2", "two-time g2 from the steady state");
  add_run_flags(g2, g2_flags);
  auto* presets = app.add_subcommand("presets", "list built-in presets");
  std::string preset_name;
  presets->add_option("--preset", preset_name, "print one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kConfigExit;
  }

  try {
    if (*spectrum) {
      const RunConfig config = resolve(spectrum_flags, Command::Spectrum);
      const SpectrumOutcome outcome = run_spectrum(config);
      const auto written = write_spectrum(outcome, config);
      std::cout << json{{"command", "spectrum"},
                        {"anticrossings", outcome.anticrossings.size()},
                        {"minimum_gaps", outcome.minimum_gaps},
                        {"written", written_list(written)}}
                       .dump()
                << "\n";
    } else if (*evolve) {
      const RunConfig config = resolve(evolve_flags, Command::Evolve);
      const EvolveOutcome outcome = run_evolve(config);
      const auto written = write_evolve(outcome, config);
      json summary{{"command", "evolve"},
                   {"steps_accepted", outcome.record.steps_accepted},
                   {"written", written_list(written)}};
      if (outcome.convergence) {
        summary["converged"] = outcome.convergence->converged;
        summary["max_drift"] = outcome.convergence->max_drift;
        summary["worst_series"] = outcome.convergence->worst_series;
        if (!outcome.convergence->converged) {
          std::cerr << "warning: trajectory changes by " << outcome.convergence->max_drift << " in "
                    << outcome.convergence->worst_series << " at cutoffs (" << outcome.convergence->n1 << ", "
                    << outcome.convergence->n2 << "); the run is flagged non-converged\n";
        }
      }
      std::cout << summary.dump() << "\n";
    } else if (*g2) {
      const RunConfig config = resolve(g2_flags, Command::G2);
      const G2Outcome outcome = run_g2(config);
      const auto written = write_g2(outcome, config);
      std::cout << json{{"command", "g2"}, {"written", written_list(written)}}.dump() << "\n";
    } else if (*presets) {
      if (preset_name.empty()) {
        std::cout << list_presets().dump(2) << "\n";
      } else {
        std::cout << preset_json(preset_name).dump(2) << "\n";
      }
    }
  } catch (const ConfigError& e) {
    report_error("config", e.what(), {{"field", e.field()}});
    return kConfigExit;
  } catch (const InputError& e) {
    report_error("input", e.what());
    return kConfigExit;
  } catch (const IntegrationError& e) {
    report_error("numerical", e.what(), {{"time", e.time()}});
    return kNumericalExit;
  } catch (const ConvergenceError& e) {
    report_error("numerical", e.what(), {{"residual", e.residual()}});
    return kNumericalExit;
  } catch (const NumericalError& e) {
    report_error("numerical", e.what());
    return kNumericalExit;
  } catch (const std::filesystem::filesystem_error& e) {
    report_error("io", e.what());
    return kConfigExit;
  }
  return 0;
}
