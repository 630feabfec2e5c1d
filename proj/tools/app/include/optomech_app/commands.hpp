#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "optomech/spectrum.hpp"
#include "optomech/trajectory.hpp"
#include "optomech_app/config.hpp"
#include "optomech_app/output.hpp"

namespace optomech::app {

struct SpectrumOutcome {
  SpectrumSweepResult sweep;
  std::vector<AnticrossingReport> anticrossings;
  std::vector<double> minimum_gaps;
};

SpectrumOutcome run_spectrum(const RunConfig& config);

/// Sup-norm change of each recorded series when both cutoffs grow by 2.
struct ConvergenceReport {
  static constexpr double kTolerance = 1e-3;

  int n1 = 0;
  int n2 = 0;
  std::vector<std::pair<std::string, double>> drift;
  double max_drift = 0.0;
  std::string worst_series;
  bool converged = true;
};

/// Compares every common series of two records on the same time grid, skipping
/// points where either value is undefined.
ConvergenceReport compare_records(const TrajectoryRecord& base, const TrajectoryRecord& refined, int n1, int n2);

struct EvolveOutcome {
  TrajectoryRecord record;
  std::optional<ConvergenceReport> convergence;
};

/// Trajectory from the configured initial state, with the standard moments and
/// the derived g2_{c,d}, z_{c,d} series. Reruns at (n1 + 2, n2 + 2) when the
/// trajectory asks for a convergence check.
EvolveOutcome run_evolve(const RunConfig& config);

/// Every label `run_evolve` records, in CSV column order.
std::vector<std::string> trajectory_labels();

struct G2Outcome {
  std::vector<double> tau;
  std::vector<double> g2_c;
  std::vector<double> g2_d;
  std::optional<double> g2_c_equal_time;
  std::optional<double> g2_d_equal_time;
};

/// Steady state followed by two-time g²(τ) of both modes.
G2Outcome run_g2(const RunConfig& config);

CsvTable spectrum_table(const SpectrumOutcome& outcome, const RunConfig& config);
CsvTable anticrossing_table(const SpectrumOutcome& outcome, const RunConfig& config);
CsvTable trajectory_table(const EvolveOutcome& outcome, const RunConfig& config);
CsvTable g2_table(const G2Outcome& outcome, const RunConfig& config);

/// Writes the outputs selected in config.output and returns their paths.
std::vector<std::filesystem::path> write_spectrum(const SpectrumOutcome& outcome, const RunConfig& config);
std::vector<std::filesystem::path> write_evolve(const EvolveOutcome& outcome, const RunConfig& config);
std::vector<std::filesystem::path> write_g2(const G2Outcome& outcome, const RunConfig& config);

/// Preset names with their parameter echo.
nlohmann::json list_presets();

/// Common metadata: tool version, command and the resolved config.
std::vector<std::string> metadata_lines(const std::string& command, const RunConfig& config);

}  // namespace optomech::app
