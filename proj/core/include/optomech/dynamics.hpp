#pragma once

// Lindblad master equation
//
//   dρ/dt = −i[H, ρ] + Σ_j (1+n_th)κ_j D[α_j]ρ + n_th κ_j D[α_j†]ρ
//           + γ D[σ]ρ + (γ_φ/2) D[σ_z]ρ,
//
// with D[c]ρ = cρc† − ½{c†c, ρ}. Density matrices are vectorized by stacking
// columns, so vec(AρB) = (Bᵀ ⊗ A) vec(ρ).

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "optomech/hilbert.hpp"
#include "optomech/trajectory.hpp"

namespace optomech {

struct DissipationParams {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double gamma = 0.0;
  double gamma_phi = 0.0;
  double n_th = 0.0;

  /// Throws InputError on negative or non-finite values.
  void validate() const;
};

/// Which ladder operators the resonator jump terms use. The matrices are the
/// same (the layout's two modes); the flag records whether they stand for the
/// effective normal modes α_j or the bare modes a_j.
enum class ModeBasis { Normal, Bare };

class DensityState {
 public:
  static constexpr double kTraceTolerance = 1e-8;
  static constexpr double kHermitianTolerance = 1e-10;
  static constexpr double kPositivityTolerance = 1e-8;

  DensityState() = default;
  explicit DensityState(DenseMatrix matrix, double time = 0.0);

  static DensityState from_vectorized(const StateVector& vec, Eigen::Index dim, double time);

  const DenseMatrix& matrix() const noexcept { return matrix_; }
  double time() const noexcept { return time_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  StateVector vectorized() const;

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  double purity() const;

  /// Throws InputError naming every violated invariant.
  void validate() const;

 private:
  DenseMatrix matrix_;
  double time_ = 0.0;
};

/// Collapse operator c = sqrt(rate)·op, contributing rate·D[op].
struct JumpOperator {
  std::string label;
  double rate = 0.0;
  OperatorMatrix op;
};

class LiouvillianOp {
 public:
  LiouvillianOp(OperatorMatrix hamiltonian, std::vector<JumpOperator> jumps, FockSpaceLayout layout,
                DissipationParams dissipation = {});

  const SparseMatrix& superoperator() const noexcept { return super_; }
  const OperatorMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<JumpOperator>& jumps() const noexcept { return jumps_; }
  const FockSpaceLayout& layout() const noexcept { return layout_; }
  const DissipationParams& dissipation() const noexcept { return dissipation_; }
  Eigen::Index dim() const noexcept { return hamiltonian_.dim(); }

  StateVector apply(const StateVector& vec_rho) const { return super_ * vec_rho; }
  /// out = L vec(ρ) for Hermitian ρ. Only the upper triangle of Lρ is
  /// computed; the rest is mirrored, so the result is exactly Hermitian.
  void apply_hermitian(const StateVector& vec_rho, StateVector& out) const;
  /// max_k |Σ_i tr_i L_ik| for the trace functional tr = vec(I).
  double trace_preservation_defect() const;

 private:
  OperatorMatrix hamiltonian_;
  std::vector<JumpOperator> jumps_;
  FockSpaceLayout layout_;
  DissipationParams dissipation_;
  SparseMatrix super_;
  // Rows of super_ belonging to entries (i, j), i ≤ j, and their positions.
  SparseMatrix upper_;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> upper_slots_;
};

/// The Liouvillian of the master equation above. Jump terms with zero rate are
/// omitted. Throws NonHermitianError, DimensionMismatch or InputError.
LiouvillianOp build_liouvillian(const OperatorMatrix& h, const DissipationParams& d,
                                const FockSpaceLayout& layout, ModeBasis basis = ModeBasis::Normal);

/// Qubit projector ⊗ thermal(n_init) ⊗ thermal(n_init), each thermal factor
/// renormalized over the truncated ladder.
DensityState thermal_state(const FockSpaceLayout& layout, double n_init, QubitLevel qubit);

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  /// 0 selects the starting step automatically.
  double initial_step = 0.0;
  double min_step = 1e-12;
  std::size_t max_steps = 200'000'000;
  /// Output times at which a full eigen-decomposition checks positivity,
  /// spread evenly over the grid (0 disables).
  int positivity_checkpoints = 0;
};

struct NamedObservable {
  std::string label;
  OperatorMatrix op;
};

/// Integrates the master equation with an adaptive Dormand-Prince 5(4) pair
/// on vec(ρ), landing exactly on each grid time and recording ⟨O⟩ = tr(ρO)
/// there. Real series are stored for Hermitian observables.
///
/// `t_grid` must start at 0 and increase strictly; times are offsets from
/// rho0.time(). Throws IntegrationError on step underflow, non-finite values,
/// or an invariant drifting beyond 10× its tolerance.
TrajectoryRecord evolve(const DensityState& rho0, const LiouvillianOp& l, const std::vector<double>& t_grid,
                        const std::vector<NamedObservable>& observables, const IntegratorOptions& options = {},
                        const std::function<void(const DensityState&)>& on_output = {});

/// ρ(t) from the same integrator, without recording observables.
DensityState propagate(const DensityState& rho0, const LiouvillianOp& l, double t,
                       const IntegratorOptions& options = {});

struct SteadyStateOptions {
  /// Smallest singular value of the bordered generator, relative to its
  /// 1-norm, below which the null space is treated as degenerate.
  double degeneracy_threshold = 1e-11;
  double residual_tolerance = 1e-10;
};

/// Right null vector of the generator, Hermitized and trace-normalized.
/// Throws DegenerateSteadyStateError when the null space is not one-dimensional.
DensityState steady_state(const LiouvillianOp& l, const SteadyStateOptions& options = {});

/// Trace distance ½‖ρ − σ‖₁.
double trace_distance(const DenseMatrix& rho, const DenseMatrix& sigma);

}  // namespace optomech
