#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "optomech/errors.hpp"
#include "optomech/models.hpp"
#include "optomech/spectrum.hpp"
#include "oracle.hpp"

using namespace optomech;

namespace {

EigenOptions with_method(EigenMethod method) {
  EigenOptions o;
  o.method = method;
  return o;
}

SpectrumSweepResult toy_sweep(const std::vector<double>& grid, double coupling) {
  SpectrumSweepResult sweep;
  sweep.delta_grid = grid;
  for (const double d : grid) {
    const double half = 0.5 * std::sqrt(d * d + 4.0 * coupling * coupling);
    sweep.levels.push_back({-half, half});
  }
  return sweep;
}

}  // namespace

TEST(LowestEigenvalues, UncoupledLadderBothSolvers) {
  const auto h = build_full_hamiltonian(FullModelParams{}, build_layout(6, 6));
  const std::vector<double> expected{-0.5, 0.5, 0.5, 0.5, 1.5};
  for (const auto method : {EigenMethod::Dense, EigenMethod::Iterative}) {
    const auto values = lowest_eigenvalues(h, 5, with_method(method));
    ASSERT_EQ(values.size(), 5u);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(values[i], expected[i], 1e-10);
  }
}

TEST(LowestEigenvalues, Identity) {
  const auto values = lowest_eigenvalues(OperatorMatrix::identity(7), 3);
  ASSERT_EQ(values.size(), 3u);
  for (const double v : values) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(LowestEigenvalues, DenseAndIterativeAgreeOnWeakCoupling) {
  const auto h = build_effective_hamiltonian(symmetric_effective_params(0.1, 0.1), build_layout(6, 6));
  const auto dense = lowest_eigenvalues(h, 5, with_method(EigenMethod::Dense));
  const auto iterative = lowest_eigenvalues(h, 5, with_method(EigenMethod::Iterative));
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(dense[i], iterative[i], 1e-9);
}

TEST(LowestEigenvalues, IterativeMatchesFullDiagonalization) {
  const auto p = symmetric_effective_params(1.0, 1.0, 1.0, 1.5, 1.0);
  const auto h = build_effective_hamiltonian(p, build_layout(6, 6));
  const auto reference = oracle::dense_full_spectrum(h.to_dense());
  const auto iterative = lowest_eigenvalues(h, 5, with_method(EigenMethod::Iterative));
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(iterative[i], reference[i], 1e-9);
}

TEST(LowestEigenvalues, LargerSpaceUsesIterativePath) {
  FullModelParams p;
  p.lambda1 = 0.05;
  p.j_coupling = 0.05;
  const auto h = build_full_hamiltonian(p, build_layout(17, 17));
  ASSERT_GT(h.dim(), EigenOptions::kDenseLimit);
  const auto automatic = lowest_eigenvalues(h, 4);
  const auto dense = lowest_eigenvalues(h, 4, with_method(EigenMethod::Dense));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(automatic[i], dense[i], 1e-9);
}

TEST(LowestEigenvalues, RejectsBadRequests) {
  const auto layout = build_layout(2, 2);
  const OperatorMatrix a(annihilation(layout, Resonator::One).entries(), false);
  EXPECT_THROW(lowest_eigenvalues(a, 2), NonHermitianError);
  const auto n = number(layout, Resonator::One);
  EXPECT_THROW(lowest_eigenvalues(n, 0), InputError);
  EXPECT_THROW(lowest_eigenvalues(n, 9), InputError);
  EXPECT_NO_THROW(lowest_eigenvalues(n, 8));
}

TEST(LowestEigenvalues, ReportsNonConvergenceWithResidual) {
  const auto h = build_effective_hamiltonian(symmetric_effective_params(1.0, 1.0), build_layout(8, 8));
  EigenOptions o = with_method(EigenMethod::Iterative);
  o.max_restarts = 0;
  o.tolerance = 1e-300;
  try {
    lowest_eigenvalues(h, 5, o);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(DeltaRange, GridEndpointsAreExact) {
  const DeltaRange r{0.0, 2.0, 101};
  const auto g = r.grid();
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_EQ(g[50], 1.0);
  EXPECT_THROW((DeltaRange{0.0, 1.0, 1}.grid()), InputError);
  EXPECT_THROW((DeltaRange{1.0, 1.0, 5}.grid()), InputError);
}

TEST(SweepDelta, WeakCouplingGapsStayOpen) {
  const auto sweep = sweep_delta(symmetric_effective_params(0.1, 0.1), DeltaRange{}, 5, build_layout(6, 6));
  ASSERT_EQ(sweep.levels.size(), 101u);
  ASSERT_EQ(sweep.level_count(), 5);
  for (const double gap : minimum_gaps(sweep)) EXPECT_GT(gap, 0.0);
}

TEST(SweepDelta, UncoupledLevelsCrossExactly) {
  const auto sweep = sweep_delta(EffectiveModelParams{}, DeltaRange{}, 5, build_layout(6, 6));
  double smallest = 1.0;
  for (const double gap : minimum_gaps(sweep)) smallest = std::min(smallest, gap);
  EXPECT_LE(smallest, 1e-12);
  EXPECT_TRUE(find_avoided_crossings(sweep).empty());
}

TEST(SweepDelta, IndependentOfWorkerCount) {
  const auto model = symmetric_effective_params(0.1, 1.0);
  const DeltaRange range{0.0, 2.0, 21};
  SweepOptions serial;
  serial.workers = 1;
  SweepOptions parallel;
  parallel.workers = 4;
  const auto a = sweep_delta(model, range, 5, build_layout(5, 5), serial);
  const auto b = sweep_delta(model, range, 5, build_layout(5, 5), parallel);
  EXPECT_EQ(a.delta_grid, b.delta_grid);
  EXPECT_EQ(a.levels, b.levels);
}

TEST(SweepDelta, LevelsAreContinuousOnFineGrid) {
  const auto sweep =
      sweep_delta(symmetric_effective_params(0.1, 0.1), DeltaRange{0.0, 2.0, 201}, 5, build_layout(6, 6));
  for (std::size_t j = 1; j < sweep.levels.size(); ++j) {
    for (int i = 0; i < 5; ++i) {
      // Level slopes are bounded by the occupation of the swept mode.
      EXPECT_LE(std::abs(sweep.levels[j][i] - sweep.levels[j - 1][i]), 6.0 * 0.01);
    }
  }
}

TEST(SweepDelta, ErrorNamesTheGridPoint) {
  EffectiveModelParams p;
  SweepOptions o;
  o.guard = CouplingGuard::Strict;
  try {
    sweep_delta(p, DeltaRange{0.0, 1.0, 3}, 2, build_layout(2, 2), o);
    FAIL() << "expected DegenerateCouplingError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("at delta=0"), std::string::npos) << e.what();
  }
}

TEST(SweepDelta, FullModelSweep) {
  FullModelParams p;
  p.lambda1 = p.lambda2 = 0.05;
  const auto sweep = sweep_delta(p, DeltaRange{0.0, 1.0, 11}, 3, build_layout(4, 4));
  EXPECT_TRUE(std::holds_alternative<FullModelParams>(sweep.params_echo));
  EXPECT_EQ(sweep.level_count(), 3);
}

TEST(AvoidedCrossings, TwoLevelToy) {
  const auto sweep = toy_sweep(DeltaRange{-1.0, 1.0, 101}.grid(), 0.1);
  const auto reports = find_avoided_crossings(sweep);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].level_pair, (std::pair<int, int>{0, 1}));
  EXPECT_NEAR(reports[0].delta_star, 0.0, 1e-12);
  EXPECT_NEAR(reports[0].gap, 0.2, 1e-12);
  EXPECT_GT(reports[0].prominence, 0.0);
  EXPECT_EQ(first_anticrossing(reports), &reports[0]);
}

TEST(AvoidedCrossings, RefinementBetweenGridPoints) {
  // Grid shifted so the true minimum at Δ = 0 falls between samples.
  auto grid = DeltaRange{-1.0, 1.0, 101}.grid();
  for (auto& d : grid) d -= 0.013;
  const auto reports = find_avoided_crossings(toy_sweep(grid, 0.1));
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_NEAR(reports[0].delta_star, 0.0, 1e-3);
  EXPECT_NEAR(reports[0].gap, 0.2, 1e-4);
}

TEST(AvoidedCrossings, MonotoneGapGivesNothing) {
  SpectrumSweepResult sweep;
  sweep.delta_grid = DeltaRange{0.0, 1.0, 11}.grid();
  for (const double d : sweep.delta_grid) sweep.levels.push_back({0.0, 1.0 + d, 3.0 + 3.0 * d});
  EXPECT_TRUE(find_avoided_crossings(sweep).empty());
  EXPECT_EQ(first_anticrossing({}), nullptr);
}

TEST(AvoidedCrossings, ShallowDipsBelowProminenceIgnored) {
  SpectrumSweepResult sweep;
  sweep.delta_grid = DeltaRange{0.0, 1.0, 11}.grid();
  for (std::size_t j = 0; j < sweep.delta_grid.size(); ++j) {
    const double dip = j == 5 ? 1e-6 : 0.0;
    sweep.levels.push_back({0.0, 1.0 - dip});
  }
  EXPECT_TRUE(find_avoided_crossings(sweep).empty());
  AnticrossingOptions loose;
  loose.min_prominence = 1e-7;
  EXPECT_EQ(find_avoided_crossings(sweep, loose).size(), 1u);
}

TEST(AvoidedCrossings, FirstPicksLowestPairThenSmallestDelta) {
  const std::vector<AnticrossingReport> reports{
      {{1, 2}, 0.1, 0.05, 0.1}, {{0, 1}, 0.9, 0.02, 0.1}, {{0, 1}, 0.4, 0.03, 0.1}};
  const auto* first = first_anticrossing(reports);
  ASSERT_NE(first, nullptr);
  EXPECT_EQ(first->level_pair.first, 0);
  EXPECT_EQ(first->delta_star, 0.4);
}

TEST(MinimumGaps, PerAdjacentPair) {
  SpectrumSweepResult sweep;
  sweep.delta_grid = {0.0, 1.0};
  sweep.levels = {{0.0, 0.5, 2.0}, {0.0, 0.3, 2.5}};
  const auto gaps = minimum_gaps(sweep);
  ASSERT_EQ(gaps.size(), 2u);
  EXPECT_DOUBLE_EQ(gaps[0], 0.3);
  EXPECT_DOUBLE_EQ(gaps[1], 1.5);
}
