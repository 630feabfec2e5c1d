#include "optomech/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "optomech/errors.hpp"

namespace optomech {
namespace {

using Eigen::Index;
using Triplet = Eigen::Triplet<Complex>;

void require_nonnegative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw InputError(std::string("dissipation parameter ") + name + " must be a finite non-negative number");
  }
}

// vec(AρB) = (Bᵀ ⊗ A) vec(ρ); `left` is A (identity when null), `right` is B.
void add_sandwich(std::vector<Triplet>& out, const SparseMatrix* left, const SparseMatrix* right, Complex scale,
                  Index d) {
  if (left != nullptr && right != nullptr) {
    for (Index r = 0; r < right->outerSize(); ++r) {
      for (SparseMatrix::InnerIterator b(*right, r); b; ++b) {
        // (Bᵀ)(b.col, b.row) = B(b.row, b.col)
        for (Index ra = 0; ra < left->outerSize(); ++ra) {
          for (SparseMatrix::InnerIterator a(*left, ra); a; ++a) {
            out.emplace_back(b.col() * d + a.row(), b.row() * d + a.col(), scale * b.value() * a.value());
          }
        }
      }
    }
  } else if (left != nullptr) {
    for (Index k = 0; k < d; ++k) {
      for (Index ra = 0; ra < left->outerSize(); ++ra) {
        for (SparseMatrix::InnerIterator a(*left, ra); a; ++a) {
          out.emplace_back(k * d + a.row(), k * d + a.col(), scale * a.value());
        }
      }
    }
  } else if (right != nullptr) {
    for (Index r = 0; r < right->outerSize(); ++r) {
      for (SparseMatrix::InnerIterator b(*right, r); b; ++b) {
        for (Index k = 0; k < d; ++k) out.emplace_back(b.col() * d + k, b.row() * d + k, scale * b.value());
      }
    }
  }
}

double trace_error_of(const StateVector& vec, Index d) {
  Complex tr = 0.0;
  for (Index i = 0; i < d; ++i) tr += vec(i + i * d);
  return std::abs(tr - 1.0);
}

double hermiticity_error_of(const StateVector& vec, Index d) {
  double worst = 0.0;
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i <= j; ++i) worst = std::max(worst, std::abs(vec(i + j * d) - std::conj(vec(j + i * d))));
  }
  return worst;
}

DenseMatrix hermitized(const DenseMatrix& m) { return 0.5 * (m + m.adjoint()); }

double min_eigenvalue_of(const DenseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitized(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

// tr(ρO) with ρ given column-stacked.
Complex expectation_of(const StateVector& vec, const SparseMatrix& op, Index d) {
  Complex sum = 0.0;
  for (Index i = 0; i < op.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(op, i); it; ++it) sum += it.value() * vec(it.col() + i * d);
  }
  return sum;
}

// Dormand-Prince 5(4) tableau (autonomous system, so the nodes c_i are unused).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class DormandPrince {
 public:
  DormandPrince(const LiouvillianOp& generator, const IntegratorOptions& options)
      : l_(generator), opt_(options) {}

  // Advances y from t to t_end exactly.
  void advance(StateVector& y, double& t, double t_end) {
    if (t_end <= t) return;
    if (!fsal_valid_) {
      l_.apply_hermitian(y, k1_);
      fsal_valid_ = true;
    }
    if (h_ <= 0.0) h_ = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step(y);

    while (t < t_end) {
      if (accepted_ + rejected_ >= opt_.max_steps) throw IntegrationError("step budget exhausted", t);
      const double remaining = t_end - t;
      const bool last = h_ >= remaining;
      const double h = last ? remaining : h_;
      if (h < opt_.min_step && !last) {
        std::ostringstream msg;
        msg << "step size underflow (h=" << h << ") at t=" << t << "; the problem looks stiff";
        throw IntegrationError(msg.str(), t);
      }

      tmp_ = y + h * (a21 * k1_);
      l_.apply_hermitian(tmp_, k2_);
      tmp_ = y + h * (a31 * k1_ + a32 * k2_);
      l_.apply_hermitian(tmp_, k3_);
      tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
      l_.apply_hermitian(tmp_, k4_);
      tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
      l_.apply_hermitian(tmp_, k5_);
      tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
      l_.apply_hermitian(tmp_, k6_);
      y_new_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
      l_.apply_hermitian(y_new_, k7_);
      err_vec_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

      double sum = 0.0;
      for (Index i = 0; i < y.size(); ++i) {
        const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y(i)), std::abs(y_new_(i)));
        const double r = std::abs(err_vec_(i)) / sc;
        sum += r * r;
      }
      const double err = std::sqrt(sum / static_cast<double>(y.size()));
      if (!std::isfinite(err)) throw IntegrationError("non-finite values in the integrator", t);

      if (err <= 1.0) {
        t = last ? t_end : t + h;
        y.swap(y_new_);
        k1_.swap(k7_);
        ++accepted_;
        double factor = err == 0.0 ? kMaxGrowth : std::clamp(kSafety * std::pow(err, -0.2), kMinShrink, kMaxGrowth);
        if (rejected_last_) factor = std::min(1.0, factor);
        // A step shortened to land on an output time keeps the earlier proposal.
        h_ = (last && h < h_) ? std::max(h * factor, h_) : h * factor;
        rejected_last_ = false;
      } else {
        ++rejected_;
        rejected_last_ = true;
        h_ = h * std::max(kMinShrink, kSafety * std::pow(err, -0.2));
      }
    }
  }

  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kMaxGrowth = 5.0;
  static constexpr double kMinShrink = 0.2;

  double scaled_norm(const StateVector& v, const StateVector& ref) const {
    double sum = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
      const double r = std::abs(v(i)) / (opt_.atol + opt_.rtol * std::abs(ref(i)));
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(v.size()));
  }

  // Starting step of Hairer, Nørsett & Wanner (II.4).
  double initial_step(const StateVector& y) {
    const double d0 = scaled_norm(y, y);
    const double d1 = scaled_norm(k1_, y);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const StateVector y1 = y + h0 * k1_;
    StateVector f1;
    l_.apply_hermitian(y1, f1);
    const double d2 = scaled_norm(f1 - k1_, y) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min(100.0 * h0, h1);
  }

  const LiouvillianOp& l_;
  IntegratorOptions opt_;
  StateVector k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_vec_;
  bool fsal_valid_ = false;
  bool rejected_last_ = false;
  double h_ = 0.0;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

std::vector<std::size_t> checkpoint_indices(std::size_t outputs, int requested) {
  std::vector<std::size_t> idx;
  if (requested <= 0 || outputs == 0) return idx;
  if (requested == 1 || outputs == 1) return {outputs - 1};
  for (int j = 0; j < requested; ++j) {
    const double pos = static_cast<double>(j) * static_cast<double>(outputs - 1) / static_cast<double>(requested - 1);
    idx.push_back(static_cast<std::size_t>(std::llround(pos)));
  }
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

void validate_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InputError("time grid is empty");
  if (t_grid.front() != 0.0) throw InputError("time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw InputError("time grid must increase strictly");
  }
}

}  // namespace

void DissipationParams::validate() const {
  require_nonnegative(kappa1, "kappa1");
  require_nonnegative(kappa2, "kappa2");
  require_nonnegative(gamma, "gamma");
  require_nonnegative(gamma_phi, "gamma_phi");
  require_nonnegative(n_th, "n_th");
}

DensityState::DensityState(DenseMatrix matrix, double time) : matrix_(std::move(matrix)), time_(time) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionMismatch("density matrix must be square");
}

DensityState DensityState::from_vectorized(const StateVector& vec, Index dim, double time) {
  if (vec.size() != dim * dim) throw DimensionMismatch("vectorized state has the wrong length");
  return DensityState(Eigen::Map<const DenseMatrix>(vec.data(), dim, dim), time);
}

StateVector DensityState::vectorized() const {
  return Eigen::Map<const StateVector>(matrix_.data(), matrix_.size());
}

double DensityState::trace_error() const { return std::abs(matrix_.trace() - 1.0); }
double DensityState::hermiticity_error() const { return hermiticity_defect(matrix_); }
double DensityState::min_eigenvalue() const { return min_eigenvalue_of(matrix_); }
double DensityState::purity() const { return (matrix_ * matrix_).trace().real(); }

void DensityState::validate() const {
  std::ostringstream problems;
  if (trace_error() > kTraceTolerance) problems << " trace error " << trace_error() << ';';
  if (hermiticity_error() > kHermitianTolerance) problems << " Hermiticity defect " << hermiticity_error() << ';';
  if (const double lo = min_eigenvalue(); lo < -kPositivityTolerance) problems << " minimum eigenvalue " << lo << ';';
  if (!problems.str().empty()) throw InputError("invalid density matrix:" + problems.str());
}

LiouvillianOp::LiouvillianOp(OperatorMatrix hamiltonian, std::vector<JumpOperator> jumps, FockSpaceLayout layout,
                             DissipationParams dissipation)
    : hamiltonian_(std::move(hamiltonian)),
      jumps_(std::move(jumps)),
      layout_(layout),
      dissipation_(dissipation) {
  const Index d = layout_.total_dim();
  if (hamiltonian_.dim() != d) throw DimensionMismatch("Hamiltonian does not match the layout");
  if (const double defect = hamiltonian_.hermiticity_defect(); defect > OperatorMatrix::kHermitianTolerance) {
    throw NonHermitianError("Liouvillian needs a Hermitian Hamiltonian (defect " + std::to_string(defect) + ")");
  }

  std::vector<Triplet> triplets;
  const SparseMatrix& h = hamiltonian_.entries();
  add_sandwich(triplets, &h, nullptr, Complex(0.0, -1.0), d);
  add_sandwich(triplets, nullptr, &h, Complex(0.0, 1.0), d);
  for (const auto& jump : jumps_) {
    if (jump.op.dim() != d) throw DimensionMismatch("jump operator '" + jump.label + "' does not match the layout");
    if (!std::isfinite(jump.rate) || jump.rate < 0.0) throw InputError("jump rate must be non-negative");
    const SparseMatrix& c = jump.op.entries();
    const SparseMatrix c_dag = c.adjoint();
    const SparseMatrix c_dag_c = c_dag * c;
    add_sandwich(triplets, &c, &c_dag, jump.rate, d);
    add_sandwich(triplets, &c_dag_c, nullptr, -0.5 * jump.rate, d);
    add_sandwich(triplets, nullptr, &c_dag_c, -0.5 * jump.rate, d);
  }
  super_ = SparseMatrix(d * d, d * d);
  super_.setFromTriplets(triplets.begin(), triplets.end());
  super_.prune(Complex(0.0));
  super_.makeCompressed();

  upper_ = SparseMatrix(d * (d + 1) / 2, d * d);
  upper_.reserve(super_.nonZeros() / 2 + d * d);
  upper_slots_.reserve(static_cast<std::size_t>(upper_.rows()));
  Index k = 0;
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i <= j; ++i, ++k) {
      upper_.startVec(k);
      for (SparseMatrix::InnerIterator it(super_, i + j * d); it; ++it) upper_.insertBack(k, it.col()) = it.value();
      upper_slots_.emplace_back(i + j * d, j + i * d);
    }
  }
  upper_.finalize();
}

void LiouvillianOp::apply_hermitian(const StateVector& vec_rho, StateVector& out) const {
  out.resize(super_.rows());
  const Complex* values = upper_.valuePtr();
  const auto* columns = upper_.innerIndexPtr();
  const auto* starts = upper_.outerIndexPtr();
  const Complex* x = vec_rho.data();
  for (Index k = 0; k < upper_.rows(); ++k) {
    Complex v = 0.0;
    for (auto p = starts[k]; p < starts[k + 1]; ++p) v += values[p] * x[columns[p]];
    const auto [here, mirror] = upper_slots_[static_cast<std::size_t>(k)];
    if (here == mirror) {
      out(here) = Complex(v.real(), 0.0);
    } else {
      out(here) = v;
      out(mirror) = std::conj(v);
    }
  }
}

double LiouvillianOp::trace_preservation_defect() const {
  const Index d = dim();
  Eigen::VectorXcd column_sums = Eigen::VectorXcd::Zero(super_.cols());
  for (Index i = 0; i < d; ++i) {
    const Index row = i + i * d;
    for (SparseMatrix::InnerIterator it(super_, row); it; ++it) column_sums(it.col()) += it.value();
  }
  return column_sums.cwiseAbs().maxCoeff();
}

LiouvillianOp build_liouvillian(const OperatorMatrix& h, const DissipationParams& d, const FockSpaceLayout& layout,
                                ModeBasis basis) {
  d.validate();
  const std::string mode_name = basis == ModeBasis::Normal ? "alpha" : "a";
  std::vector<JumpOperator> jumps;
  auto add = [&](std::string label, double rate, OperatorMatrix op) {
    if (rate > 0.0) jumps.push_back({std::move(label), rate, std::move(op)});
  };
  const std::array<std::pair<Resonator, double>, 2> modes{{{Resonator::One, d.kappa1}, {Resonator::Two, d.kappa2}}};
  for (const auto& [mode, kappa] : modes) {
    const std::string name = mode_name + (mode == Resonator::One ? "1" : "2");
    const OperatorMatrix a = annihilation(layout, mode);
    add(name + "_loss", (1.0 + d.n_th) * kappa, a);
    add(name + "_gain", d.n_th * kappa, a.adjoint());
  }
  add("qubit_relaxation", d.gamma, pauli(layout, PauliOp::Lower));
  add("qubit_dephasing", 0.5 * d.gamma_phi, pauli(layout, PauliOp::Z));
  return LiouvillianOp(h, std::move(jumps), layout, d);
}

DensityState thermal_state(const FockSpaceLayout& layout, double n_init, QubitLevel qubit) {
  if (!std::isfinite(n_init) || n_init < 0.0) throw InputError("initial thermal occupation must be non-negative");
  auto ladder = [n_init](int cutoff) {
    std::vector<double> p(static_cast<std::size_t>(cutoff), 0.0);
    const double ratio = n_init / (1.0 + n_init);
    double weight = 1.0;
    double total = 0.0;
    for (int k = 0; k < cutoff; ++k) {
      p[static_cast<std::size_t>(k)] = weight;
      total += weight;
      weight *= ratio;
    }
    for (auto& v : p) v /= total;
    return p;
  };
  const auto p1 = ladder(layout.n1());
  const auto p2 = ladder(layout.n2());
  DenseMatrix rho = DenseMatrix::Zero(layout.total_dim(), layout.total_dim());
  for (int k1 = 0; k1 < layout.n1(); ++k1) {
    for (int k2 = 0; k2 < layout.n2(); ++k2) {
      const Index i = layout.index(qubit, k1, k2);
      rho(i, i) = p1[static_cast<std::size_t>(k1)] * p2[static_cast<std::size_t>(k2)];
    }
  }
  return DensityState(std::move(rho), 0.0);
}

TrajectoryRecord evolve(const DensityState& rho0, const LiouvillianOp& l, const std::vector<double>& t_grid,
                        const std::vector<NamedObservable>& observables, const IntegratorOptions& options,
                        const std::function<void(const DensityState&)>& on_output) {
  validate_grid(t_grid);
  const Index d = l.dim();
  if (rho0.dim() != d) throw DimensionMismatch("initial state does not match the Liouvillian");
  rho0.validate();
  for (const auto& o : observables) {
    if (o.op.dim() != d) throw DimensionMismatch("observable '" + o.label + "' does not match the Liouvillian");
  }

  TrajectoryRecord record;
  record.times.reserve(t_grid.size());
  std::vector<std::vector<Complex>> values(observables.size());
  for (auto& v : values) v.reserve(t_grid.size());
  const auto checkpoints = checkpoint_indices(t_grid.size(), options.positivity_checkpoints);
  auto next_checkpoint = checkpoints.begin();

  StateVector y = rho0.vectorized();
  DormandPrince stepper(l, options);
  double t = 0.0;
  for (std::size_t n = 0; n < t_grid.size(); ++n) {
    stepper.advance(y, t, t_grid[n]);
    const double abs_time = rho0.time() + t_grid[n];

    const double trace_err = trace_error_of(y, d);
    const double herm_err = hermiticity_error_of(y, d);
    if (!(trace_err <= 10.0 * DensityState::kTraceTolerance) ||
        !(herm_err <= 10.0 * DensityState::kHermitianTolerance)) {
      std::ostringstream msg;
      msg << "density-matrix invariants lost at t=" << abs_time << " (trace error " << trace_err
          << ", Hermiticity defect " << herm_err << ")";
      throw IntegrationError(msg.str(), abs_time);
    }

    record.times.push_back(abs_time);
    for (std::size_t k = 0; k < observables.size(); ++k) {
      values[k].push_back(expectation_of(y, observables[k].op.entries(), d));
    }

    const bool checkpoint = next_checkpoint != checkpoints.end() && *next_checkpoint == n;
    if (checkpoint || on_output) {
      const DensityState state = DensityState::from_vectorized(y, d, abs_time);
      if (checkpoint) {
        ++next_checkpoint;
        const double lo = state.min_eigenvalue();
        record.diagnostics.push_back({abs_time, trace_err, herm_err, lo});
        if (lo < -10.0 * DensityState::kPositivityTolerance) {
          std::ostringstream msg;
          msg << "density matrix lost positivity at t=" << abs_time << " (minimum eigenvalue " << lo << ")";
          throw IntegrationError(msg.str(), abs_time);
        }
      }
      if (on_output) on_output(state);
    }
  }

  for (std::size_t k = 0; k < observables.size(); ++k) {
    if (observables[k].op.hermitian_hint()) {
      for (auto& v : values[k]) v = Complex(v.real(), 0.0);
      record.add_series(observables[k].label, std::move(values[k]), SeriesKind::Real);
    } else {
      record.add_series(observables[k].label, std::move(values[k]), SeriesKind::Complex);
    }
  }
  record.steps_accepted = stepper.accepted();
  record.steps_rejected = stepper.rejected();
  return record;
}

DensityState propagate(const DensityState& rho0, const LiouvillianOp& l, double t, const IntegratorOptions& options) {
  if (!(t >= 0.0)) throw InputError("propagation time must be non-negative");
  if (rho0.dim() != l.dim()) throw DimensionMismatch("initial state does not match the Liouvillian");
  rho0.validate();
  StateVector y = rho0.vectorized();
  DormandPrince stepper(l, options);
  double now = 0.0;
  stepper.advance(y, now, t);
  return DensityState::from_vectorized(y, l.dim(), rho0.time() + t);
}

DensityState steady_state(const LiouvillianOp& l, const SteadyStateOptions& options) {
  const Index d = l.dim();
  const Index n = d * d;
  const SparseMatrix& super = l.superoperator();

  // Replace row 0 of L with the trace functional: A x = e₀ pins tr ρ = 1.
  using ColMajorMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(super.nonZeros() + d));
  for (Index r = 1; r < super.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(super, r); it; ++it) triplets.emplace_back(r, it.col(), it.value());
  }
  for (Index i = 0; i < d; ++i) triplets.emplace_back(0, i + i * d, 1.0);
  ColMajorMatrix bordered(n, n);
  bordered.setFromTriplets(triplets.begin(), triplets.end());
  bordered.makeCompressed();

  Eigen::SparseLU<ColMajorMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(bordered);
  if (lu.info() != Eigen::Success) {
    throw DegenerateSteadyStateError("generator has a degenerate null space (singular bordered system: " +
                                     lu.lastErrorMessage() + ")");
  }

  // Smallest singular value of the bordered system by inverse iteration on AᴴA.
  double one_norm = 0.0;
  for (Index c = 0; c < bordered.outerSize(); ++c) {
    double sum = 0.0;
    for (ColMajorMatrix::InnerIterator it(bordered, c); it; ++it) sum += std::abs(it.value());
    one_norm = std::max(one_norm, sum);
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  StateVector probe(n);
  for (Index i = 0; i < n; ++i) probe(i) = Complex(normal(rng), normal(rng));
  probe.normalize();
  double growth = 0.0;
  for (int iter = 0; iter < 8; ++iter) {
    const StateVector y = lu.solve(probe);
    const StateVector z = lu.adjoint().solve(y);
    growth = z.norm();
    if (!std::isfinite(growth) || growth == 0.0) break;
    probe = z / growth;
  }
  const double sigma_min = std::isfinite(growth) && growth > 0.0 ? 1.0 / std::sqrt(growth) : 0.0;
  if (sigma_min < options.degeneracy_threshold * one_norm) {
    std::ostringstream msg;
    msg << "generator has a degenerate null space (smallest singular value " << sigma_min
        << " of the bordered system, norm " << one_norm << ")";
    throw DegenerateSteadyStateError(msg.str());
  }

  StateVector rhs = StateVector::Zero(n);
  rhs(0) = 1.0;
  StateVector x = lu.solve(rhs);
  x += lu.solve(StateVector(rhs - bordered * x));

  DenseMatrix rho = Eigen::Map<const DenseMatrix>(x.data(), d, d);
  rho = hermitized(rho);
  rho /= rho.trace();
  DensityState state(std::move(rho), 0.0);

  const double residual = (super * state.vectorized()).cwiseAbs().maxCoeff();
  if (residual > options.residual_tolerance) {
    std::ostringstream msg;
    msg << "steady-state residual " << residual << " exceeds " << options.residual_tolerance;
    throw ConvergenceError(msg.str(), residual);
  }
  return state;
}

double trace_distance(const DenseMatrix& rho, const DenseMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimensionMismatch("trace distance operands");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitized(rho - sigma), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace optomech
