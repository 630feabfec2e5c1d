#include "optomech/trajectory.hpp"

#include <algorithm>

#include "optomech/errors.hpp"

namespace optomech {

void TrajectoryRecord::add_series(std::string label, std::vector<std::complex<double>> values, SeriesKind kind) {
  if (values.size() != times.size()) {
    throw DimensionMismatch("series '" + label + "' has " + std::to_string(values.size()) + " values for " +
                            std::to_string(times.size()) + " times");
  }
  if (has(label)) throw InputError("duplicate series label '" + label + "'");
  labels_.push_back(std::move(label));
  kinds_.push_back(kind);
  values_.push_back(std::move(values));
}

void TrajectoryRecord::add_real_series(std::string label, const std::vector<double>& values) {
  std::vector<std::complex<double>> complex_values(values.begin(), values.end());
  add_series(std::move(label), std::move(complex_values), SeriesKind::Real);
}

bool TrajectoryRecord::has(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t TrajectoryRecord::position(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InputError("no series labelled '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

SeriesKind TrajectoryRecord::kind(const std::string& label) const { return kinds_[position(label)]; }

const std::vector<std::complex<double>>& TrajectoryRecord::series(const std::string& label) const {
  return values_[position(label)];
}

std::vector<double> TrajectoryRecord::real_series(const std::string& label) const {
  const auto& values = series(label);
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](const auto& v) { return v.real(); });
  return out;
}

}  // namespace optomech
