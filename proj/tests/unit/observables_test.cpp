#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "optomech/errors.hpp"
#include "optomech/models.hpp"
#include "optomech/observables.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace optomech;
using optomech::testing::grid;
using optomech::testing::projector;
using optomech::testing::truncated_mean;

namespace {

OperatorMatrix zero_hamiltonian(const FockSpaceLayout& layout) {
  return OperatorMatrix(SparseMatrix(layout.total_dim(), layout.total_dim()), true);
}

// Thermal channel on mode 1; mode 2 and the qubit relax fast to their ground
// states so the steady state is unique.
LiouvillianOp thermal_mode_liouvillian(const FockSpaceLayout& layout, double kappa, double n_th) {
  const auto a1 = annihilation(layout, Resonator::One);
  return LiouvillianOp(zero_hamiltonian(layout),
                       {{"a1_loss", (1.0 + n_th) * kappa, a1},
                        {"a1_gain", n_th * kappa, a1.adjoint()},
                        {"a2_loss", 1.0, annihilation(layout, Resonator::Two)},
                        {"qubit", 1.0, pauli(layout, PauliOp::Lower)}},
                       layout);
}

LiouvillianOp damped_coupled_liouvillian(const FockSpaceLayout& layout, double rate) {
  DissipationParams d;
  d.kappa1 = d.kappa2 = d.gamma = d.gamma_phi = rate;
  d.n_th = 0.15;
  return build_liouvillian(build_effective_hamiltonian(symmetric_effective_params(0.5, 1.0), layout), d, layout);
}

// |g⟩ ⊗ ψ ⊗ |0⟩ for a mode-1 wavefunction ψ.
DensityState mode1_state(const FockSpaceLayout& layout, const Eigen::VectorXcd& psi) {
  StateVector v = StateVector::Zero(layout.total_dim());
  for (int k = 0; k < layout.n1(); ++k) v(layout.index(QubitLevel::Ground, k, 0)) = psi(k);
  return DensityState(projector(v));
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

DenseMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  DenseMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST(Expectation, IdentityAndSigmaZ) {
  const auto layout = build_layout(4, 3);
  const auto rho = thermal_state(layout, 0.4, QubitLevel::Ground);
  EXPECT_NEAR(std::abs(expectation(rho, identity(layout)) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(expectation(rho, pauli(layout, PauliOp::Z)).real(), -1.0, 1e-14);
  EXPECT_NEAR(expectation(thermal_state(layout, 0.4, QubitLevel::Excited), pauli(layout, PauliOp::Z)).real(), 1.0,
              1e-14);
}

TEST(Expectation, ThermalOccupation) {
  const auto layout = build_layout(6, 6);
  const auto rho = thermal_state(layout, 0.15, QubitLevel::Excited);
  const Complex n = expectation(rho, number(layout, Resonator::Two));
  EXPECT_NEAR(n.real(), truncated_mean(0.15, 6), 1e-15);
  EXPECT_EQ(n.imag(), 0.0);
}

TEST(Expectation, RealForHermitianOperators) {
  std::mt19937_64 rng(11);
  const auto layout = build_layout(3, 3);
  const DensityState rho(random_density(layout.total_dim(), rng));
  for (const auto& o : standard_observables(layout)) {
    if (o.op.hermitian_hint()) {
      EXPECT_LE(std::abs(expectation(rho, o.op).imag()), 1e-10) << o.label;
    }
  }
}

TEST(Expectation, DimensionMismatch) {
  EXPECT_THROW(expectation(thermal_state(build_layout(2, 2), 0.0, QubitLevel::Ground), identity(build_layout(3, 2))),
               DimensionMismatch);
}

TEST(G2EqualTime, ThermalIsTwo) {
  // Truncation error of the geometric ladder is ~ N² r^N with r = n/(n+1); N = 32 keeps it below 1e-10.
  for (const double n : {0.15, 0.5}) {
    for (const auto mode : {CoherenceMode::Cavity, CoherenceMode::Drive}) {
      const auto layout = mode == CoherenceMode::Cavity ? build_layout(32, 2) : build_layout(2, 32);
      const auto g2 = g2_equal_time(thermal_state(layout, n, QubitLevel::Excited), layout, mode);
      ASSERT_TRUE(g2.has_value());
      EXPECT_NEAR(*g2, 2.0, 1e-6) << "n=" << n;
    }
  }
}

TEST(G2EqualTime, ThermalAtSmallTruncation) {
  // Frozen from the closed form Σk(k−1)p_k / (Σk p_k)² at N = 6.
  const auto layout = build_layout(6, 6);
  const auto g2 = g2_equal_time(thermal_state(layout, 0.15, QubitLevel::Excited), layout, CoherenceMode::Cavity);
  const double r = 0.15 / 1.15;
  double z = 0, m1 = 0, m2 = 0;
  for (int k = 0; k < 6; ++k) {
    const double p = std::pow(r, k);
    z += p;
    m1 += k * p;
    m2 += k * (k - 1) * p;
  }
  ASSERT_TRUE(g2.has_value());
  EXPECT_NEAR(*g2, (m2 / z) / ((m1 / z) * (m1 / z)), 1e-12);
  EXPECT_NEAR(*g2, 1.99383, 1e-5);
}

TEST(G2EqualTime, SingleQuantumIsZero) {
  const auto layout = build_layout(4, 4);
  const DensityState rho(projector(layout.basis_state(QubitLevel::Ground, 1, 1)));
  EXPECT_EQ(g2_equal_time(rho, layout, CoherenceMode::Cavity).value(), 0.0);
  EXPECT_EQ(g2_equal_time(rho, layout, CoherenceMode::Drive).value(), 0.0);
}

TEST(G2EqualTime, CoherentSurrogateIsOne) {
  const int n = 12;
  const auto layout = build_layout(n, 2);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Complex alpha(1.0, 0.0);
  const Eigen::MatrixXcd generator = alpha * a.adjoint() - std::conj(alpha) * a;
  const Eigen::VectorXcd psi = generator.exp().col(0);
  const auto g2 = g2_equal_time(mode1_state(layout, psi), layout, CoherenceMode::Cavity);
  ASSERT_TRUE(g2.has_value());
  EXPECT_NEAR(*g2, 1.0, 1e-3);
}

TEST(G2EqualTime, VacuumIsUndefined) {
  const auto layout = build_layout(3, 3);
  const auto rho = thermal_state(layout, 0.0, QubitLevel::Excited);
  EXPECT_FALSE(g2_equal_time(rho, layout, CoherenceMode::Cavity).has_value());
  EXPECT_FALSE(g2_equal_time(rho, layout, CoherenceMode::Drive).has_value());
}

TEST(G2EqualTime, QuadratureVariant) {
  // Vacuum: ⟨X²⟩ = 1, ⟨X⁴⟩ = 3.
  const auto layout = build_layout(8, 2);
  G2Options o;
  o.op = CoherenceOperator::Quadrature;
  const auto g2 = g2_equal_time(thermal_state(layout, 0.0, QubitLevel::Ground), layout, CoherenceMode::Cavity, o);
  ASSERT_TRUE(g2.has_value());
  EXPECT_NEAR(*g2, 3.0, 1e-12);
}

TEST(G2EqualTime, PhaseRotationInvariance) {
  std::mt19937_64 rng(7);
  const auto layout = build_layout(5, 4);
  const Eigen::Index d = layout.total_dim();
  const DenseMatrix rho = random_density(d, rng);
  for (const auto mode : {CoherenceMode::Cavity, CoherenceMode::Drive}) {
    const DenseMatrix n = number(layout, resonator_of(mode)).to_dense();
    for (const double theta : {0.3, 1.7, 3.1}) {
      DenseMatrix u = DenseMatrix::Zero(d, d);
      for (Eigen::Index i = 0; i < d; ++i) u(i, i) = std::exp(Complex(0.0, theta * n(i, i).real()));
      const DensityState rotated(u * rho * u.adjoint());
      const double before = g2_equal_time(DensityState(rho), layout, mode).value();
      const double after = g2_equal_time(rotated, layout, mode).value();
      EXPECT_NEAR(before, after, 1e-12);
    }
  }
}

TEST(G2EqualTime, ProductStateIndependence) {
  std::mt19937_64 rng(3);
  const auto layout = build_layout(4, 3);
  const DenseMatrix qubit = random_density(2, rng);
  const DenseMatrix mode1 = random_density(4, rng);
  const DensityState first(kron(kron(qubit, mode1), random_density(3, rng)));
  const DensityState second(kron(kron(random_density(2, rng), mode1), random_density(3, rng)));
  EXPECT_NEAR(g2_equal_time(first, layout, CoherenceMode::Cavity).value(),
              g2_equal_time(second, layout, CoherenceMode::Cavity).value(), 1e-10);
}

TEST(G2TwoTime, ZeroLagMatchesEqualTime) {
  const auto layout = build_layout(3, 3);
  DissipationParams d;
  d.kappa1 = d.kappa2 = 0.001;
  d.gamma = 0.001;
  d.gamma_phi = 0.01;
  d.n_th = 0.15;
  const auto l =
      build_liouvillian(build_effective_hamiltonian(symmetric_effective_params(0.5, 1.0), layout), d, layout);
  const auto rho_ss = steady_state(l);
  for (const auto mode : {CoherenceMode::Cavity, CoherenceMode::Drive}) {
    const auto tau = g2_two_time(rho_ss, l, mode, {0.0, 1.0});
    EXPECT_NEAR(tau[0], g2_equal_time(rho_ss, layout, mode).value(), 1e-8);
  }
}

TEST(G2TwoTime, DampedThermalMode) {
  const auto layout = build_layout(14, 2);
  const double kappa = 0.1;
  const auto l = thermal_mode_liouvillian(layout, kappa, 0.15);
  const auto rho_ss = steady_state(l);
  const auto taus = grid(40.0, 41);
  const auto g2 = g2_two_time(rho_ss, l, CoherenceMode::Cavity, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) EXPECT_NEAR(g2[i], 1.0 + std::exp(-kappa * taus[i]), 1e-4);
}

TEST(G2TwoTime, MatchesDenseOracle) {
  const auto layout = build_layout(8, 2);
  const auto l = thermal_mode_liouvillian(layout, 0.1, 0.15);
  const auto rho_ss = steady_state(l);
  const std::vector<double> taus{0.0, 2.5, 10.0, 30.0};
  const auto g2 = g2_two_time(rho_ss, l, CoherenceMode::Cavity, taus);
  const auto ref =
      oracle::dense_two_time_g2(rho_ss.matrix(), l, annihilation(layout, Resonator::One).to_dense(), taus);
  for (std::size_t i = 0; i < taus.size(); ++i) EXPECT_NEAR(g2[i], ref[i], 1e-7);
}

TEST(G2TwoTime, LongLagFactorizes) {
  const auto layout = build_layout(3, 3);
  const auto l = damped_coupled_liouvillian(layout, 0.1);
  const auto rho_ss = steady_state(l);
  for (const auto mode : {CoherenceMode::Cavity, CoherenceMode::Drive}) {
    const auto g2 = g2_two_time(rho_ss, l, mode, {0.0, 300.0});
    EXPECT_NEAR(g2[1], 1.0, 1e-3);
  }
}

TEST(G2TwoTime, RejectsNonStationaryState) {
  const auto layout = build_layout(3, 3);
  const auto l = damped_coupled_liouvillian(layout, 0.1);
  EXPECT_THROW(g2_two_time(thermal_state(layout, 0.15, QubitLevel::Excited), l, CoherenceMode::Cavity, {0.0}),
               InputError);
}

TEST(G2TwoTime, EmptyModeGivesNaN) {
  const auto layout = build_layout(3, 2);
  DissipationParams d;
  d.kappa1 = d.kappa2 = d.gamma = 0.1;
  const auto l = build_liouvillian(zero_hamiltonian(layout), d, layout);
  const auto g2 = g2_two_time(steady_state(l), l, CoherenceMode::Drive, {0.0, 1.0});
  ASSERT_EQ(g2.size(), 2u);
  EXPECT_TRUE(std::isnan(g2[0]));
  EXPECT_TRUE(std::isnan(g2[1]));
}

TEST(PopulationImbalance, VacuumAndSingleQuantum) {
  const auto layout = build_layout(4, 4);
  const auto vacuum = thermal_state(layout, 0.0, QubitLevel::Ground);
  const DensityState one(projector(layout.basis_state(QubitLevel::Ground, 1, 1)));
  for (const auto mode : {CoherenceMode::Cavity, CoherenceMode::Drive}) {
    EXPECT_EQ(population_imbalance(vacuum, layout, mode, ImbalanceConvention::Literal), 0.0);
    EXPECT_EQ(population_imbalance(vacuum, layout, mode, ImbalanceConvention::Number), 0.0);
    EXPECT_EQ(population_imbalance(one, layout, mode, ImbalanceConvention::Literal), 0.0);
    EXPECT_NEAR(population_imbalance(one, layout, mode, ImbalanceConvention::Number), -1.0, 1e-15);
  }
}

TEST(PopulationImbalance, LiteralIsRealPartOfCreation) {
  std::mt19937_64 rng(5);
  const auto layout = build_layout(4, 3);
  const DensityState rho(random_density(layout.total_dim(), rng));
  for (const auto mode : {CoherenceMode::Cavity, CoherenceMode::Drive}) {
    const double expected = expectation(rho, creation(layout, resonator_of(mode))).real();
    EXPECT_NEAR(population_imbalance(rho, layout, mode), expected, 1e-12);
  }
}

TEST(DerivedSeries, MatchDirectEvaluation) {
  const auto layout = build_layout(4, 4);
  const auto l = damped_coupled_liouvillian(layout, 0.01);
  std::vector<DensityState> states;
  auto record = evolve(thermal_state(layout, 0.15, QubitLevel::Excited), l, grid(6.0, 4), standard_observables(layout),
                       {}, [&](const DensityState& s) { states.push_back(s); });
  add_derived_series(record);
  for (const auto* label : {"x_plus_1", "x_plus_2", "alpha_1_expect", "alpha_2_expect", "n_1", "n_2", "pair_1",
                            "pair_2", "g2_c", "g2_d", "z_c", "z_d", "z_c_number", "z_d_number"}) {
    EXPECT_TRUE(record.has(label)) << label;
  }
  const auto g2_c = record.real_series("g2_c");
  const auto g2_d = record.real_series("g2_d");
  const auto z_c = record.real_series("z_c");
  const auto z_d_number = record.real_series("z_d_number");
  for (std::size_t i = 0; i < states.size(); ++i) {
    EXPECT_NEAR(g2_c[i], g2_equal_time(states[i], layout, CoherenceMode::Cavity).value(), 1e-12);
    EXPECT_NEAR(g2_d[i], g2_equal_time(states[i], layout, CoherenceMode::Drive).value(), 1e-12);
    EXPECT_NEAR(z_c[i], population_imbalance(states[i], layout, CoherenceMode::Cavity), 1e-12);
    EXPECT_NEAR(z_d_number[i],
                population_imbalance(states[i], layout, CoherenceMode::Drive, ImbalanceConvention::Number), 1e-12);
    EXPECT_GE(g2_c[i], 0.0);
  }
}

TEST(DerivedSeries, VacuumMarksUndefined) {
  const auto layout = build_layout(3, 3);
  const LiouvillianOp l(zero_hamiltonian(layout), {}, layout);
  auto record = evolve(thermal_state(layout, 0.0, QubitLevel::Ground), l, {0.0, 1.0}, standard_observables(layout));
  add_derived_series(record);
  for (const double v : record.real_series("g2_c")) EXPECT_TRUE(std::isnan(v));
  for (const double v : record.real_series("z_d")) EXPECT_EQ(v, 0.0);
}
