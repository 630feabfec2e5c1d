#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "optomech/hilbert.hpp"
#include "optomech/models.hpp"

namespace optomech {

enum class EigenMethod {
  /// Dense for dim ≤ kDenseLimit, iterative above.
  Auto,
  Dense,
  Iterative,
};

struct EigenOptions {
  static constexpr Eigen::Index kDenseLimit = 512;

  EigenMethod method = EigenMethod::Auto;
  /// Residual bound ‖Hx − θx‖ for every requested Ritz pair (iterative only).
  double tolerance = 1e-10;
  int max_restarts = 200;
};

/// The m smallest eigenvalues of a Hermitian operator, ascending.
///
/// The iterative path is a thick-restarted block Lanczos with full
/// reorthogonalization; block size exceeds m so degenerate levels are resolved.
/// Throws NonHermitianError, InputError (m out of range) or ConvergenceError.
std::vector<double> lowest_eigenvalues(const OperatorMatrix& h, int m, const EigenOptions& options = {});

struct DeltaRange {
  double lo = 0.0;
  double hi = 2.0;
  int points = 101;

  /// Grid value j computed as lo + (hi − lo)·j/(points − 1).
  double at(int j) const;
  std::vector<double> grid() const;
};

using SweepModel = std::variant<EffectiveModelParams, FullModelParams>;

struct SweepOptions {
  EigenOptions eigen;
  /// Zero-coupling effective model allowed (uncoupled ladder).
  CouplingGuard guard = CouplingGuard::AllowZero;
  /// Worker threads; ≤ 0 picks the hardware concurrency.
  int workers = 1;
};

struct SpectrumSweepResult {
  std::vector<double> delta_grid;
  /// levels[j][i] = i-th level at delta_grid[j], ascending in i.
  std::vector<std::vector<double>> levels;
  SweepModel params_echo;

  int level_count() const { return levels.empty() ? 0 : static_cast<int>(levels.front().size()); }
};

/// Sweeps Δ = ω₁ − ω₂ by holding ω₂ fixed and setting ω₁ = ω₂ + Δ. The
/// result is identical for any worker count.
SpectrumSweepResult sweep_delta(const SweepModel& model, const DeltaRange& range, int m,
                                const FockSpaceLayout& layout, const SweepOptions& options = {});

struct AnticrossingReport {
  std::pair<int, int> level_pair;
  double delta_star = 0.0;
  double gap = 0.0;
  double prominence = 0.0;
};

struct AnticrossingOptions {
  double min_prominence = 1e-4;
  /// Gaps at or below this are real crossings, not avoided ones.
  double crossing_tolerance = 1e-9;
};

/// Interior local minima of each adjacent-level gap with prominence at least
/// `min_prominence`, refined by a parabola through the three grid points
/// around the minimum. Ordered by level pair, then by Δ.
std::vector<AnticrossingReport> find_avoided_crossings(const SpectrumSweepResult& sweep,
                                                       const AnticrossingOptions& options = {});

/// Smallest gap of each adjacent level pair over the grid.
std::vector<double> minimum_gaps(const SpectrumSweepResult& sweep);

/// The anticrossing of the lowest level pair (ties broken by smallest Δ).
/// Returns nullptr for an empty report.
const AnticrossingReport* first_anticrossing(const std::vector<AnticrossingReport>& reports);

}  // namespace optomech
