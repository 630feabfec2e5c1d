#pragma once

// Truncated Fock space for a qubit coupled to two bosonic modes, and the
// elementary operators embedded in it.
//
// Basis ordering is qubit ⊗ resonator-1 ⊗ resonator-2, with the last factor
// varying fastest:
//
//   index(q, k1, k2) = q * n1 * n2 + k1 * n2 + k2
//
// Qubit levels: q = 0 is |g⟩, q = 1 is |e⟩, and σ_z|e⟩ = +|e⟩, σ_z|g⟩ = −|g⟩.

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace optomech {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

enum class Resonator { One = 1, Two = 2 };
enum class QubitLevel { Ground = 0, Excited = 1 };
enum class PauliOp { X, Z, Lower };

/// Prefactor of X⁺ = s·(a + a†): `Half` is the bare-mode convention, `Unit`
/// the normal-mode one.
enum class QuadratureScale { Half, Unit };

class FockSpaceLayout {
 public:
  /// Throws InputError unless n1 ≥ 2 and n2 ≥ 2.
  FockSpaceLayout(int n1, int n2);

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  int cutoff(Resonator mode) const noexcept { return mode == Resonator::One ? n1_ : n2_; }
  Eigen::Index total_dim() const noexcept { return Eigen::Index{2} * n1_ * n2_; }

  Eigen::Index index(QubitLevel q, int k1, int k2) const;
  StateVector basis_state(QubitLevel q, int k1, int k2) const;

  friend bool operator==(const FockSpaceLayout&, const FockSpaceLayout&) = default;

 private:
  int n1_;
  int n2_;
};

FockSpaceLayout build_layout(int n1, int n2);

/// Immutable sparse operator. When `hermitian_hint()` is set the entries are
/// Hermitian to 1e-12 elementwise; the constructor enforces it.
class OperatorMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-12;

  OperatorMatrix() = default;
  explicit OperatorMatrix(SparseMatrix entries, bool hermitian_hint = false);

  /// Builds (A + A†)/2, which is exactly Hermitian.
  static OperatorMatrix hermitian_part(const SparseMatrix& entries);
  static OperatorMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const SparseMatrix& entries() const noexcept { return entries_; }
  bool hermitian_hint() const noexcept { return hermitian_hint_; }

  /// max |A_ij − conj(A_ji)|.
  double hermiticity_defect() const;
  DenseMatrix to_dense() const { return DenseMatrix(entries_); }
  OperatorMatrix adjoint() const;
  StateVector apply(const StateVector& v) const;

  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(double s, const OperatorMatrix& a);
  friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a);

 private:
  SparseMatrix entries_;
  bool hermitian_hint_ = false;
};

double hermiticity_defect(const SparseMatrix& m);
double hermiticity_defect(const DenseMatrix& m);

OperatorMatrix identity(const FockSpaceLayout& layout);
OperatorMatrix annihilation(const FockSpaceLayout& layout, Resonator mode);
OperatorMatrix creation(const FockSpaceLayout& layout, Resonator mode);
OperatorMatrix number(const FockSpaceLayout& layout, Resonator mode);
OperatorMatrix pauli(const FockSpaceLayout& layout, PauliOp which);
OperatorMatrix quadrature(const FockSpaceLayout& layout, Resonator mode,
                          QuadratureScale scale = QuadratureScale::Unit);

/// Checked mode lookup for values coming from configs or CLI flags.
Resonator resonator_from_index(int mode);

}  // namespace optomech
