#include "optomech/models.hpp"

#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {
namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InputError(std::string("parameter ") + name + " must be finite");
}

}  // namespace

void FullModelParams::validate() const {
  require_finite(omega, "omega");
  require_finite(omega1, "omega1");
  require_finite(omega2, "omega2");
  require_finite(lambda1, "lambda1");
  require_finite(lambda2, "lambda2");
  require_finite(j_coupling, "j_coupling");
  if (omega1 <= 0.0 || omega2 <= 0.0) throw InputError("resonator frequencies must be positive");
}

void EffectiveModelParams::validate() const {
  require_finite(omega, "omega");
  require_finite(omega1, "omega1");
  require_finite(omega2, "omega2");
  require_finite(k1, "k1");
  require_finite(k2, "k2");
  require_finite(j_coupling, "j_coupling");
  if (omega1 <= 0.0 || omega2 <= 0.0) throw InputError("resonator frequencies must be positive");
}

DerivedConstants derive_effective_constants(const EffectiveModelParams& p, CouplingGuard guard) {
  p.validate();
  DerivedConstants d;
  d.delta = p.omega1 - p.omega2;
  const double k1sq = p.k1 * p.k1;
  const double k2sq = p.k2 * p.k2;
  const double ksq = k1sq + k2sq;
  if (ksq == 0.0) {
    if (guard == CouplingGuard::Strict) {
      throw DegenerateCouplingError("k1 = k2 = 0 leaves k_eff undefined in the effective model");
    }
    d.omega_eff = p.omega1;
    d.omega_prime = p.omega2;
    return d;
  }
  d.k_eff = std::sqrt(ksq);
  d.omega_eff = (p.omega1 * k1sq + p.omega2 * k2sq) / d.k_eff;
  d.omega_prime = (p.omega1 * k2sq + p.omega2 * k1sq) / d.k_eff;
  d.c2 = d.delta * p.k1 * p.k2 / ksq;
  return d;
}

OperatorMatrix build_full_hamiltonian(const FullModelParams& p, const FockSpaceLayout& layout) {
  p.validate();
  const OperatorMatrix n1 = number(layout, Resonator::One);
  const OperatorMatrix x1 = quadrature(layout, Resonator::One, QuadratureScale::Unit);
  const OperatorMatrix x2 = quadrature(layout, Resonator::Two, QuadratureScale::Unit);
  const OperatorMatrix sz = pauli(layout, PauliOp::Z);
  const OperatorMatrix sx = pauli(layout, PauliOp::X);

  const OperatorMatrix h = 0.5 * p.omega * sz + p.omega1 * n1 + p.omega2 * number(layout, Resonator::Two) +
                           (p.lambda1 * x1 + p.lambda2 * x2) * sx + p.j_coupling * (n1 * x2);
  return OperatorMatrix::hermitian_part(h.entries());
}

OperatorMatrix build_effective_hamiltonian(const EffectiveModelParams& p, const FockSpaceLayout& layout,
                                           const EffectiveTerms& terms) {
  const DerivedConstants d = derive_effective_constants(p, terms.guard);

  const OperatorMatrix a1 = annihilation(layout, Resonator::One);
  const OperatorMatrix a2 = annihilation(layout, Resonator::Two);
  const OperatorMatrix a1d = a1.adjoint();
  const OperatorMatrix a2d = a2.adjoint();
  const OperatorMatrix sz = pauli(layout, PauliOp::Z);
  const OperatorMatrix x1 = a1 + a1d;
  const OperatorMatrix x2 = a2 + a2d;
  const OperatorMatrix hop = a1d * a2 + a1 * a2d;

  OperatorMatrix h = 0.5 * p.omega * sz + d.omega_prime * (a2d * a2) +
                     d.omega_eff * (a1d * a1 + d.k_eff * (x1 * sz)) +
                     d.c2 * (hop + d.k_eff * (x2 * sz));

  OperatorMatrix interaction = hop;
  if (terms.cubic) {
    const OperatorMatrix sum = a1 + a2;
    const OperatorMatrix squares = a1 * a1 - a2 * a2;
    const OperatorMatrix cubic = sum.adjoint() * squares;
    interaction = interaction + cubic + cubic.adjoint();
  }
  h = h + p.j_coupling * interaction;
  return OperatorMatrix::hermitian_part(h.entries());
}

EffectiveModelParams symmetric_effective_params(double k, double j, double omega, double omega1,
                                                double omega2) {
  EffectiveModelParams p;
  p.omega = omega;
  p.omega1 = omega1;
  p.omega2 = omega2;
  p.k1 = k;
  p.k2 = k;
  p.j_coupling = j;
  return p;
}

}  // namespace optomech
