#pragma once

// Run configuration for the command-line tool.
//
// A config is a JSON object:
//
//   {
//     "model": "effective" | "full",
//     "params": {"omega", "omega1", "omega2", "k1", "k2", "j"}          (effective)
//               {"omega", "omega1", "omega2", "lambda1", "lambda2", "j"} (full),
//     "layout": {"n1", "n2"},
//     "dissipation": {"kappa1", "kappa2", "gamma", "gamma_phi", "n_th"},
//     "sweep": {"delta_lo", "delta_hi", "points", "m_levels", "min_prominence"?},
//     "trajectory": {"t_max", "points", "n_init", "qubit": "excited" | "ground",
//                    "mode_basis"?: "normal" | "bare", "check_convergence"?},
//     "g2": {"tau_max", "points"},
//     "observables"?: [labels],
//     "output"?: {"dir", "formats": ["csv", "json", "svg"]},
//     "workers"?: integer (0 = all processors)
//   }
//
// Keys marked ? are optional. Sections other than model, params and layout are
// only required by the commands that use them. Unknown keys are rejected.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "optomech/dynamics.hpp"
#include "optomech/errors.hpp"
#include "optomech/models.hpp"
#include "optomech/spectrum.hpp"

namespace optomech::app {

/// Config problem tied to a field path such as "params.k1".
class ConfigError : public InputError {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : InputError(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ModelKind { Effective, Full };

struct SweepSpec {
  DeltaRange range;
  int m_levels = 5;
  double min_prominence = 1e-4;
};

struct TrajectorySpec {
  double t_max = 0.0;
  int points = 2;
  double n_init = 0.0;
  QubitLevel qubit = QubitLevel::Excited;
  /// Defaults to normal modes for the effective model, bare modes for the full one.
  std::optional<ModeBasis> mode_basis;
  bool check_convergence = false;
};

struct G2Spec {
  double tau_max = 0.0;
  int points = 2;
};

struct OutputSpec {
  std::string dir = ".";
  std::vector<std::string> formats{"csv"};
};

struct RunConfig {
  ModelKind model = ModelKind::Effective;
  EffectiveModelParams effective;
  FullModelParams full;
  int n1 = 2;
  int n2 = 2;
  std::optional<DissipationParams> dissipation;
  std::optional<SweepSpec> sweep;
  std::optional<TrajectorySpec> trajectory;
  std::optional<G2Spec> g2;
  /// Empty selects every series.
  std::vector<std::string> observables;
  OutputSpec output;
  int workers = 0;

  FockSpaceLayout layout() const { return build_layout(n1, n2); }
  SweepModel sweep_model() const;
  ModeBasis mode_basis() const;
  bool wants(const std::string& format) const;
};

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);

/// Reads a JSON file; parse errors become ConfigError.
nlohmann::json load_json_file(const std::string& path);

/// Command-line overrides; unset members leave the config untouched.
struct Overrides {
  std::optional<int> n1;
  std::optional<int> n2;
  std::optional<int> workers;
  std::optional<int> m_levels;
  std::optional<DeltaRange> delta;
  std::optional<double> t_max;
  std::optional<int> t_points;
  std::optional<std::string> out_dir;
  std::optional<std::vector<std::string>> formats;
};

enum class Command { Spectrum, Evolve, G2 };

/// Applies flags on top of the config. --tmax and --tpoints set the
/// trajectory for `evolve` and the τ grid for `g2`.
void apply_overrides(RunConfig& config, const Overrides& overrides, Command command);

/// Checks that the sections `command` needs are present and consistent.
void require_sections(const RunConfig& config, Command command);

/// "lo:hi:n" → DeltaRange.
DeltaRange parse_delta_range(const std::string& text);

/// "csv,json" → {"csv", "json"}; rejects unknown formats.
std::vector<std::string> parse_formats(const std::string& text);

/// `points` evenly spaced times on [0, t_max]; a zero horizon gives {0}.
std::vector<double> uniform_grid(double t_max, int points);

}  // namespace optomech::app
