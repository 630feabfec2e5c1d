#include "optomech/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "optomech/errors.hpp"

namespace optomech {
namespace {

using Triplet = Eigen::Triplet<Complex>;

struct Entry {
  int row;
  int col;
  Complex value;
};

// Nonzeros of one tensor factor. Factors are tiny, so a flat list is enough.
using Factor = std::vector<Entry>;

Factor identity_factor(int n) {
  Factor f;
  for (int i = 0; i < n; ++i) f.push_back({i, i, 1.0});
  return f;
}

Factor lowering_factor(int n) {
  Factor f;
  for (int k = 1; k < n; ++k) f.push_back({k - 1, k, std::sqrt(static_cast<double>(k))});
  return f;
}

SparseMatrix embed(const FockSpaceLayout& layout, const Factor& qubit, const Factor& res1,
                   const Factor& res2) {
  const int n1 = layout.n1();
  const int n2 = layout.n2();
  std::vector<Triplet> triplets;
  triplets.reserve(qubit.size() * res1.size() * res2.size());
  for (const auto& q : qubit) {
    for (const auto& a : res1) {
      for (const auto& b : res2) {
        const auto row = (static_cast<Eigen::Index>(q.row) * n1 + a.row) * n2 + b.row;
        const auto col = (static_cast<Eigen::Index>(q.col) * n1 + a.col) * n2 + b.col;
        triplets.emplace_back(row, col, q.value * a.value * b.value);
      }
    }
  }
  SparseMatrix m(layout.total_dim(), layout.total_dim());
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

SparseMatrix embed_mode(const FockSpaceLayout& layout, Resonator mode, const Factor& f) {
  if (mode == Resonator::One) {
    return embed(layout, identity_factor(2), f, identity_factor(layout.n2()));
  }
  return embed(layout, identity_factor(2), identity_factor(layout.n1()), f);
}

void check_same_dim(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("operator dimensions differ: " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  }
}

}  // namespace

FockSpaceLayout::FockSpaceLayout(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 2 || n2 < 2) {
    throw InputError("Fock truncation must be at least 2 per resonator (got n1=" +
                     std::to_string(n1) + ", n2=" + std::to_string(n2) + ")");
  }
}

Eigen::Index FockSpaceLayout::index(QubitLevel q, int k1, int k2) const {
  if (k1 < 0 || k1 >= n1_ || k2 < 0 || k2 >= n2_) {
    throw InputError("Fock index out of range");
  }
  return (static_cast<Eigen::Index>(q) * n1_ + k1) * n2_ + k2;
}

StateVector FockSpaceLayout::basis_state(QubitLevel q, int k1, int k2) const {
  StateVector v = StateVector::Zero(total_dim());
  v(index(q, k1, k2)) = 1.0;
  return v;
}

FockSpaceLayout build_layout(int n1, int n2) { return FockSpaceLayout(n1, n2); }

double hermiticity_defect(const SparseMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const SparseMatrix diff = m - SparseMatrix(m.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

double hermiticity_defect(const DenseMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix::OperatorMatrix(SparseMatrix entries, bool hermitian_hint)
    : entries_(std::move(entries)), hermitian_hint_(hermitian_hint) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionMismatch("operator matrix must be square");
  }
  entries_.makeCompressed();
  if (hermitian_hint_) {
    const double defect = optomech::hermiticity_defect(entries_);
    if (defect > kHermitianTolerance) {
      throw NonHermitianError("operator flagged Hermitian has defect " + std::to_string(defect));
    }
  }
}

OperatorMatrix OperatorMatrix::hermitian_part(const SparseMatrix& entries) {
  SparseMatrix h = Complex(0.5) * (entries + SparseMatrix(entries.adjoint()));
  h.prune(Complex(0.0));
  return OperatorMatrix(std::move(h), true);
}

OperatorMatrix OperatorMatrix::identity(Eigen::Index dim) {
  SparseMatrix m(dim, dim);
  m.setIdentity();
  return OperatorMatrix(std::move(m), true);
}

double OperatorMatrix::hermiticity_defect() const { return optomech::hermiticity_defect(entries_); }

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix(SparseMatrix(entries_.adjoint()), hermitian_hint_);
}

StateVector OperatorMatrix::apply(const StateVector& v) const {
  if (v.size() != dim()) throw DimensionMismatch("state size does not match operator");
  return entries_ * v;
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_dim(a, b);
  return OperatorMatrix(SparseMatrix(a.entries_ + b.entries_), a.hermitian_hint_ && b.hermitian_hint_);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_dim(a, b);
  return OperatorMatrix(SparseMatrix(a.entries_ - b.entries_), a.hermitian_hint_ && b.hermitian_hint_);
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_dim(a, b);
  return OperatorMatrix(SparseMatrix(a.entries_ * b.entries_), false);
}

OperatorMatrix operator*(double s, const OperatorMatrix& a) {
  return OperatorMatrix(SparseMatrix(Complex(s) * a.entries_), a.hermitian_hint_);
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) {
  return OperatorMatrix(SparseMatrix(s * a.entries_), a.hermitian_hint_ && s.imag() == 0.0);
}

OperatorMatrix identity(const FockSpaceLayout& layout) {
  return OperatorMatrix::identity(layout.total_dim());
}

Resonator resonator_from_index(int mode) {
  if (mode == 1) return Resonator::One;
  if (mode == 2) return Resonator::Two;
  throw InputError("resonator index must be 1 or 2 (got " + std::to_string(mode) + ")");
}

OperatorMatrix annihilation(const FockSpaceLayout& layout, Resonator mode) {
  if (mode != Resonator::One && mode != Resonator::Two) throw InputError("invalid resonator");
  return OperatorMatrix(embed_mode(layout, mode, lowering_factor(layout.cutoff(mode))));
}

OperatorMatrix creation(const FockSpaceLayout& layout, Resonator mode) {
  return annihilation(layout, mode).adjoint();
}

OperatorMatrix number(const FockSpaceLayout& layout, Resonator mode) {
  if (mode != Resonator::One && mode != Resonator::Two) throw InputError("invalid resonator");
  Factor f;
  for (int k = 0; k < layout.cutoff(mode); ++k) f.push_back({k, k, static_cast<double>(k)});
  return OperatorMatrix(embed_mode(layout, mode, f), true);
}

OperatorMatrix pauli(const FockSpaceLayout& layout, PauliOp which) {
  Factor q;
  bool hermitian = true;
  switch (which) {
    case PauliOp::X:
      q = {{0, 1, 1.0}, {1, 0, 1.0}};
      break;
    case PauliOp::Z:
      q = {{0, 0, -1.0}, {1, 1, 1.0}};
      break;
    case PauliOp::Lower:
      // |g⟩⟨e|
      q = {{0, 1, 1.0}};
      hermitian = false;
      break;
    default:
      throw InputError("invalid Pauli selector");
  }
  return OperatorMatrix(embed(layout, q, identity_factor(layout.n1()), identity_factor(layout.n2())),
                        hermitian);
}

OperatorMatrix quadrature(const FockSpaceLayout& layout, Resonator mode, QuadratureScale scale) {
  const double s = scale == QuadratureScale::Half ? 0.5 : 1.0;
  const OperatorMatrix a = annihilation(layout, mode);
  return OperatorMatrix::hermitian_part(Complex(s) * (a.entries() + SparseMatrix(a.entries().adjoint())));
}

}  // namespace optomech
