#pragma once

#include <optional>
#include <vector>

#include "optomech/dynamics.hpp"
#include "optomech/hilbert.hpp"
#include "optomech/trajectory.hpp"

namespace optomech {

/// c is the cavity normal mode α₁, d the driving mechanical probe mode α₂.
enum class CoherenceMode { Cavity, Drive };

/// Operator entering g². `NormalMode` gives the calibrated normal-ordered
/// ⟨α†α†αα⟩/⟨α†α⟩²; `Quadrature` uses X = α + α† and gives ⟨X⁴⟩/⟨X²⟩².
enum class CoherenceOperator { NormalMode, Quadrature };

/// `Literal`: Re(⟨α + α†⟩ − ⟨α⟩) = Re⟨α†⟩.
/// `Number`: ⟨α + α†⟩ − ⟨α†α⟩.
enum class ImbalanceConvention { Literal, Number };

Resonator resonator_of(CoherenceMode mode) noexcept;

Complex expectation(const DensityState& rho, const OperatorMatrix& o);

struct G2Options {
  /// Denominators below this leave g² undefined.
  double epsilon = 1e-12;
  CoherenceOperator op = CoherenceOperator::NormalMode;
};

/// Equal-time second-order coherence; std::nullopt when the mode is empty.
std::optional<double> g2_equal_time(const DensityState& rho, const FockSpaceLayout& layout, CoherenceMode mode,
                                    const G2Options& options = {});

struct TwoTimeOptions {
  /// Largest |Lρ_ss| entry accepted as stationary.
  double stationarity_tolerance = 1e-8;
  double epsilon = 1e-12;
  IntegratorOptions integrator;
};

/// g²(τ) = ⟨α†(0)α†(τ)α(τ)α(0)⟩/⟨α†α⟩² by the quantum regression theorem:
/// the deformed state αρα†/tr(αρα†) is propagated under `l` and ⟨α†α⟩ read
/// off at each τ. Throws InputError for a non-stationary state; returns NaN
/// entries when the steady occupation is below epsilon.
std::vector<double> g2_two_time(const DensityState& rho_ss, const LiouvillianOp& l, CoherenceMode mode,
                                const std::vector<double>& tau_grid, const TwoTimeOptions& options = {});

double population_imbalance(const DensityState& rho, const FockSpaceLayout& layout, CoherenceMode mode,
                            ImbalanceConvention convention = ImbalanceConvention::Literal);

/// Raw moments recorded along a trajectory:
/// x_plus_{1,2} = ⟨α+α†⟩, alpha_{1,2}_expect = ⟨α⟩, n_{1,2} = ⟨α†α⟩,
/// pair_{1,2} = ⟨α†α†αα⟩.
std::vector<NamedObservable> standard_observables(const FockSpaceLayout& layout);

/// Adds g2_c, g2_d, z_c, z_d (literal) and z_c_number, z_d_number computed
/// from the raw moments of `standard_observables`.
void add_derived_series(TrajectoryRecord& record, double epsilon = 1e-12);

}  // namespace optomech
