#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace optomech {

enum class SeriesKind { Real, Complex };

/// Invariant diagnostics of the density matrix at one output time.
struct CheckpointDiagnostic {
  double time = 0.0;
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

/// Time series of named observables. Labels keep insertion order; every
/// series has one value per entry of `times`.
class TrajectoryRecord {
 public:
  std::vector<double> times;
  std::vector<CheckpointDiagnostic> diagnostics;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;

  void add_series(std::string label, std::vector<std::complex<double>> values,
                  SeriesKind kind = SeriesKind::Complex);
  void add_real_series(std::string label, const std::vector<double>& values);

  bool has(const std::string& label) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  SeriesKind kind(const std::string& label) const;
  const std::vector<std::complex<double>>& series(const std::string& label) const;
  std::vector<double> real_series(const std::string& label) const;

 private:
  std::size_t position(const std::string& label) const;

  std::vector<std::string> labels_;
  std::vector<SeriesKind> kinds_;
  std::vector<std::vector<std::complex<double>>> values_;
};

}  // namespace optomech
