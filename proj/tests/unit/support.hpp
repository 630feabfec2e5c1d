#pragma once

#include <cmath>
#include <vector>

#include "optomech/hilbert.hpp"

namespace optomech::testing {

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline DenseMatrix projector(const StateVector& v) { return v * v.adjoint(); }

inline std::vector<double> grid(double t_max, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = t_max * i / (points - 1);
  return g;
}

// Mean of p_n ∝ r^n over n < N, r = n̄/(1+n̄):  r/(1−r) − N r^N/(1−r^N).
inline double truncated_mean(double nbar, int cutoff) {
  const double r = nbar / (1.0 + nbar);
  const double rn = std::pow(r, cutoff);
  return r / (1.0 - r) - cutoff * rn / (1.0 - rn);
}

}  // namespace optomech::testing
