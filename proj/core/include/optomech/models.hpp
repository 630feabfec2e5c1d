#pragma once

// Hamiltonians of the qubit + cavity + mechanical-resonator system.
//
// Full model (bare modes a₁ cavity, a₂ mechanics):
//
//   H = (ω/2)σz + ω₁a₁†a₁ + ω₂a₂†a₂ + [λ₁(a₁+a₁†) + λ₂(a₂+a₂†)]σx
//     + J a₁†a₁(a₂+a₂†)
//
// Effective two-frequency model (normal modes α₁ privileged, α₂ disadvantaged):
//
//   H_sys = (ω/2)σz + ω′α₂†α₂ + ω_eff[α₁†α₁ + k_eff(α₁+α₁†)σz]
//         + c₂[(α₁†α₂ + α₁α₂†) + k_eff(α₂†+α₂)σz]
//   H_int = J[(α₁†α₂ + α₂†α₁) + (α₁+α₂)†(α₁²−α₂²) + h.c.]
//
// with ω_eff = (ω₁k₁² + ω₂k₂²)/k_eff, k_eff² = k₁² + k₂²,
// ω′ = (ω₁k₂² + ω₂k₁²)/k_eff, c₂ = Δk₁k₂/k_eff², Δ = ω₁ − ω₂.
//
// Frequencies are in units of the mechanical frequency ω₂.

#include "optomech/hilbert.hpp"

namespace optomech {

struct FullModelParams {
  double omega = 1.0;
  double omega1 = 1.0;
  double omega2 = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double j_coupling = 0.0;

  /// Throws InputError on non-positive resonator frequencies or non-finite values.
  void validate() const;
};

struct EffectiveModelParams {
  double omega = 1.0;
  double omega1 = 1.0;
  double omega2 = 1.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double j_coupling = 0.0;

  void validate() const;
};

struct DerivedConstants {
  double omega_eff = 0.0;
  double k_eff = 0.0;
  double omega_prime = 0.0;
  double c2 = 0.0;
  double delta = 0.0;
};

/// What to do when k₁ = k₂ = 0, where k_eff vanishes.
enum class CouplingGuard {
  /// Throw DegenerateCouplingError.
  Strict,
  /// Use the uncoupled limit: ω_eff = ω₁, ω′ = ω₂, k_eff = c₂ = 0.
  AllowZero,
};

DerivedConstants derive_effective_constants(const EffectiveModelParams& p,
                                            CouplingGuard guard = CouplingGuard::Strict);

OperatorMatrix build_full_hamiltonian(const FullModelParams& p, const FockSpaceLayout& layout);

struct EffectiveTerms {
  CouplingGuard guard = CouplingGuard::Strict;
  /// Drop the cubic (α₁+α₂)†(α₁²−α₂²) + h.c. part of H_int, leaving the
  /// beam-splitter hopping only.
  bool cubic = true;
};

OperatorMatrix build_effective_hamiltonian(const EffectiveModelParams& p, const FockSpaceLayout& layout,
                                           const EffectiveTerms& terms = {});

/// Single quoted coupling k mapped onto both resonators (k₁ = k₂ = k).
EffectiveModelParams symmetric_effective_params(double k, double j, double omega = 1.0,
                                                double omega1 = 1.0, double omega2 = 1.0);

}  // namespace optomech
