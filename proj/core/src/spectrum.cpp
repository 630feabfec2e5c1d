#include "optomech/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "optomech/errors.hpp"

namespace optomech {
namespace {

using Eigen::Index;

std::vector<double> dense_lowest(const SparseMatrix& h, int m) {
  const DenseMatrix dense(h);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("dense Hermitian eigensolver failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  return {values.data(), values.data() + m};
}

// Appends the columns of `block` to basis[:, 0:cols) after orthogonalizing
// against it (classical Gram-Schmidt, applied twice). A column is dropped when
// less than `drop_tol` of its original norm survives. Returns the number of
// columns appended.
Index append_orthonormal(DenseMatrix& basis, Index cols, DenseMatrix block, double drop_tol) {
  const Eigen::VectorXd original = block.colwise().norm().transpose();
  for (int pass = 0; pass < 2 && cols > 0; ++pass) {
    const auto q = basis.leftCols(cols);
    block -= q * (q.adjoint() * block);
  }
  Index added = 0;
  for (Index j = 0; j < block.cols() && cols + added < basis.cols(); ++j) {
    StateVector v = block.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      const auto q = basis.leftCols(cols + added);
      v -= q * (q.adjoint() * v);
    }
    const double norm = v.norm();
    if (!(norm > drop_tol * original(j))) continue;
    basis.col(cols + added) = v / norm;
    ++added;
  }
  return added;
}

std::vector<double> iterative_lowest(const SparseMatrix& h, int m, const EigenOptions& options) {
  const Index n = h.rows();
  const Index block = std::min<Index>(n, m + std::max(2, m / 2 + 1));
  const Index capacity = std::min<Index>(n, std::max<Index>(6 * block, 48));
  const double drop_tol = 1e-12;

  std::mt19937_64 rng(0x0b5e55edULL);
  std::normal_distribution<double> normal;
  DenseMatrix start(n, block);
  for (Index j = 0; j < block; ++j) {
    for (Index i = 0; i < n; ++i) start(i, j) = Complex(normal(rng), normal(rng));
  }

  double residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    DenseMatrix basis(n, capacity);
    Index cols = append_orthonormal(basis, 0, start, drop_tol);
    Index last_begin = 0;
    Index last_size = cols;
    while (cols < capacity && last_size > 0) {
      DenseMatrix next = h * basis.middleCols(last_begin, last_size);
      const Index added = append_orthonormal(basis, cols, std::move(next), drop_tol);
      last_begin = cols;
      last_size = added;
      cols += added;
    }
    const auto v = basis.leftCols(cols);
    const DenseMatrix hv = h * v;
    DenseMatrix projected = v.adjoint() * hv;
    projected = 0.5 * (projected + projected.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> ritz(projected);
    if (ritz.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz eigensolver failed");

    const Index keep = std::min<Index>(block, cols);
    if (keep < m) throw NumericalError("Krylov space collapsed below the requested level count");
    const auto y = ritz.eigenvectors().leftCols(keep);
    const DenseMatrix x = v * y;
    const DenseMatrix hx = hv * y;
    residual = 0.0;
    for (Index i = 0; i < m; ++i) {
      residual = std::max(residual, (hx.col(i) - ritz.eigenvalues()(i) * x.col(i)).norm());
    }
    // A Krylov space that exhausted the whole space (or closed on an
    // invariant subspace) makes the Ritz values exact.
    if (residual <= options.tolerance || cols == n) {
      const Eigen::VectorXd& values = ritz.eigenvalues();
      return {values.data(), values.data() + m};
    }
    start = x;
  }
  std::ostringstream msg;
  msg << "block Lanczos did not converge after " << options.max_restarts << " restarts (residual "
      << residual << ")";
  throw ConvergenceError(msg.str(), residual);
}

OperatorMatrix hamiltonian_at(const SweepModel& model, double delta, const FockSpaceLayout& layout,
                              CouplingGuard guard) {
  return std::visit(
      [&](auto p) -> OperatorMatrix {
        p.omega1 = p.omega2 + delta;
        if constexpr (std::is_same_v<decltype(p), EffectiveModelParams>) {
          EffectiveTerms terms;
          terms.guard = guard;
          return build_effective_hamiltonian(p, layout, terms);
        } else {
          return build_full_hamiltonian(p, layout);
        }
      },
      model);
}

[[noreturn]] void rethrow_annotated(std::exception_ptr error, double delta) {
  std::ostringstream prefix;
  prefix << "at delta=" << delta << ": ";
  try {
    std::rethrow_exception(error);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix.str() + e.what(), e.residual());
  } catch (const InputError& e) {
    throw InputError(prefix.str() + e.what());
  } catch (const std::exception& e) {
    throw NumericalError(prefix.str() + e.what());
  }
}

}  // namespace

std::vector<double> lowest_eigenvalues(const OperatorMatrix& h, int m, const EigenOptions& options) {
  if (m < 1 || m > h.dim()) {
    throw InputError("requested " + std::to_string(m) + " levels from a " + std::to_string(h.dim()) +
                     "-dimensional operator");
  }
  const double defect = h.hermiticity_defect();
  if (defect > OperatorMatrix::kHermitianTolerance) {
    throw NonHermitianError("eigenvalue request on a non-Hermitian operator (defect " +
                            std::to_string(defect) + ")");
  }
  bool dense = options.method == EigenMethod::Dense;
  if (options.method == EigenMethod::Auto) dense = h.dim() <= EigenOptions::kDenseLimit;
  return dense ? dense_lowest(h.entries(), m) : iterative_lowest(h.entries(), m, options);
}

double DeltaRange::at(int j) const {
  return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(points - 1);
}

std::vector<double> DeltaRange::grid() const {
  if (points < 2) throw InputError("delta sweep needs at least 2 points");
  if (!(hi > lo)) throw InputError("delta sweep needs hi > lo");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) g[static_cast<std::size_t>(j)] = at(j);
  return g;
}

SpectrumSweepResult sweep_delta(const SweepModel& model, const DeltaRange& range, int m,
                                const FockSpaceLayout& layout, const SweepOptions& options) {
  SpectrumSweepResult result;
  result.delta_grid = range.grid();
  result.params_echo = model;
  const std::size_t count = result.delta_grid.size();
  result.levels.assign(count, {});
  std::vector<std::exception_ptr> errors(count);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < count; j = next++) {
      try {
        const OperatorMatrix h = hamiltonian_at(model, result.delta_grid[j], layout, options.guard);
        result.levels[j] = lowest_eigenvalues(h, m, options.eigen);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };

  int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(count));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (std::size_t j = 0; j < count; ++j) {
    if (errors[j]) rethrow_annotated(errors[j], result.delta_grid[j]);
  }
  return result;
}

std::vector<double> minimum_gaps(const SpectrumSweepResult& sweep) {
  const int m = sweep.level_count();
  std::vector<double> gaps(static_cast<std::size_t>(std::max(0, m - 1)), std::numeric_limits<double>::infinity());
  for (const auto& row : sweep.levels) {
    for (int i = 0; i + 1 < m; ++i) {
      gaps[static_cast<std::size_t>(i)] = std::min(gaps[static_cast<std::size_t>(i)], row[i + 1] - row[i]);
    }
  }
  return gaps;
}

std::vector<AnticrossingReport> find_avoided_crossings(const SpectrumSweepResult& sweep,
                                                       const AnticrossingOptions& options) {
  std::vector<AnticrossingReport> reports;
  const auto& x = sweep.delta_grid;
  const std::size_t n = x.size();
  const int m = sweep.level_count();
  if (n < 3) return reports;

  std::vector<double> g(n);
  for (int level = 0; level + 1 < m; ++level) {
    for (std::size_t j = 0; j < n; ++j) g[j] = sweep.levels[j][level + 1] - sweep.levels[j][level];

    for (std::size_t j = 1; j + 1 < n; ++j) {
      if (!(g[j] < g[j - 1] && g[j] <= g[j + 1])) continue;
      if (g[j] <= options.crossing_tolerance) continue;

      double left = g[j];
      for (std::size_t k = j; k-- > 0;) {
        if (g[k] < g[j]) break;
        left = std::max(left, g[k]);
      }
      double right = g[j];
      for (std::size_t k = j + 1; k < n; ++k) {
        if (g[k] < g[j]) break;
        right = std::max(right, g[k]);
      }
      const double prominence = std::min(left, right) - g[j];
      if (prominence < options.min_prominence) continue;

      // Vertex of the parabola through the three samples around j.
      const double x0 = x[j - 1], x1 = x[j], x2 = x[j + 1];
      const double y0 = g[j - 1], y1 = g[j], y2 = g[j + 1];
      const double d10 = (y1 - y0) / (x1 - x0);
      const double d21 = (y2 - y1) / (x2 - x1);
      const double curvature = (d21 - d10) / (x2 - x0);
      double x_star = x1;
      double g_star = y1;
      if (curvature > 0.0) {
        const double slope_at_x1 = d10 + curvature * (x1 - x0);
        x_star = std::clamp(x1 - slope_at_x1 / (2.0 * curvature), x0, x2);
        const double dx = x_star - x1;
        g_star = y1 + slope_at_x1 * dx + curvature * dx * dx;
        g_star = std::clamp(g_star, 0.0, y1);
      }
      reports.push_back({{level, level + 1}, x_star, g_star, prominence});
    }
  }
  return reports;
}

const AnticrossingReport* first_anticrossing(const std::vector<AnticrossingReport>& reports) {
  const AnticrossingReport* best = nullptr;
  for (const auto& r : reports) {
    if (best == nullptr || r.level_pair.first < best->level_pair.first ||
        (r.level_pair.first == best->level_pair.first && r.delta_star < best->delta_star)) {
      best = &r;
    }
  }
  return best;
}

}  // namespace optomech
