#include "optomech/observables.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "optomech/errors.hpp"

namespace optomech {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* suffix(CoherenceMode mode) { return mode == CoherenceMode::Cavity ? "1" : "2"; }

}  // namespace

Resonator resonator_of(CoherenceMode mode) noexcept {
  return mode == CoherenceMode::Cavity ? Resonator::One : Resonator::Two;
}

Complex expectation(const DensityState& rho, const OperatorMatrix& o) {
  if (rho.dim() != o.dim()) {
    throw DimensionMismatch("operator of size " + std::to_string(o.dim()) + " on a state of size " +
                            std::to_string(rho.dim()));
  }
  // tr(ρO) = Σ_ij O_ij ρ_ji
  const SparseMatrix& op = o.entries();
  const DenseMatrix& m = rho.matrix();
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < op.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(op, i); it; ++it) sum += it.value() * m(it.col(), i);
  }
  return sum;
}

std::optional<double> g2_equal_time(const DensityState& rho, const FockSpaceLayout& layout, CoherenceMode mode,
                                    const G2Options& options) {
  const OperatorMatrix a = annihilation(layout, resonator_of(mode));
  double numerator = 0.0;
  double denominator = 0.0;
  if (options.op == CoherenceOperator::NormalMode) {
    const OperatorMatrix a_dag = a.adjoint();
    denominator = expectation(rho, a_dag * a).real();
    numerator = expectation(rho, a_dag * a_dag * a * a).real();
  } else {
    const OperatorMatrix x = a + a.adjoint();
    const OperatorMatrix x2 = x * x;
    denominator = expectation(rho, x2).real();
    numerator = expectation(rho, x2 * x2).real();
  }
  if (denominator < options.epsilon) return std::nullopt;
  return numerator / (denominator * denominator);
}

std::vector<double> g2_two_time(const DensityState& rho_ss, const LiouvillianOp& l, CoherenceMode mode,
                                const std::vector<double>& tau_grid, const TwoTimeOptions& options) {
  if (rho_ss.dim() != l.dim()) throw DimensionMismatch("steady state does not match the Liouvillian");
  const double drift = (l.superoperator() * rho_ss.vectorized()).cwiseAbs().maxCoeff();
  if (drift > options.stationarity_tolerance) {
    std::ostringstream msg;
    msg << "two-time correlations need a stationary state (max |L rho| = " << drift << ")";
    throw InputError(msg.str());
  }

  const OperatorMatrix a = annihilation(l.layout(), resonator_of(mode));
  const OperatorMatrix a_dag = a.adjoint();
  const OperatorMatrix occupation = OperatorMatrix::hermitian_part((a_dag * a).entries());
  const double n_ss = expectation(rho_ss, occupation).real();
  if (n_ss < options.epsilon) return std::vector<double>(tau_grid.size(), kNaN);

  const DenseMatrix deformed = a.entries() * rho_ss.matrix() * a_dag.entries();
  DenseMatrix normalized = deformed / deformed.trace();
  normalized = 0.5 * (normalized + normalized.adjoint()).eval();
  const DensityState start(std::move(normalized), 0.0);

  const TrajectoryRecord record = evolve(start, l, tau_grid, {{"n", occupation}}, options.integrator);
  std::vector<double> g2 = record.real_series("n");
  for (auto& v : g2) v /= n_ss;
  return g2;
}

double population_imbalance(const DensityState& rho, const FockSpaceLayout& layout, CoherenceMode mode,
                            ImbalanceConvention convention) {
  const Resonator r = resonator_of(mode);
  const double quad = expectation(rho, quadrature(layout, r, QuadratureScale::Unit)).real();
  if (convention == ImbalanceConvention::Literal) {
    return quad - expectation(rho, annihilation(layout, r)).real();
  }
  return quad - expectation(rho, number(layout, r)).real();
}

std::vector<NamedObservable> standard_observables(const FockSpaceLayout& layout) {
  const std::array<Resonator, 2> modes{Resonator::One, Resonator::Two};
  auto tag = [](Resonator r) { return std::string(r == Resonator::One ? "1" : "2"); };
  std::vector<NamedObservable> out;
  for (const Resonator r : modes) out.push_back({"x_plus_" + tag(r), quadrature(layout, r, QuadratureScale::Unit)});
  for (const Resonator r : modes) out.push_back({"alpha_" + tag(r) + "_expect", annihilation(layout, r)});
  for (const Resonator r : modes) out.push_back({"n_" + tag(r), number(layout, r)});
  for (const Resonator r : modes) {
    const OperatorMatrix a = annihilation(layout, r);
    const OperatorMatrix a_dag = a.adjoint();
    out.push_back({"pair_" + tag(r), OperatorMatrix::hermitian_part((a_dag * a_dag * a * a).entries())});
  }
  return out;
}

void add_derived_series(TrajectoryRecord& record, double epsilon) {
  const std::size_t count = record.times.size();
  std::vector<std::pair<std::string, std::vector<double>>> g2_series, z_series, z_number_series;
  for (const CoherenceMode mode : {CoherenceMode::Cavity, CoherenceMode::Drive}) {
    const std::string s = suffix(mode);
    const std::string tag = mode == CoherenceMode::Cavity ? "c" : "d";
    const auto x = record.real_series("x_plus_" + s);
    const auto& alpha = record.series("alpha_" + s + "_expect");
    const auto n = record.real_series("n_" + s);
    const auto pair = record.real_series("pair_" + s);

    std::vector<double> g2(count), z_literal(count), z_number(count);
    for (std::size_t i = 0; i < count; ++i) {
      g2[i] = n[i] < epsilon ? kNaN : pair[i] / (n[i] * n[i]);
      z_literal[i] = x[i] - alpha[i].real();
      z_number[i] = x[i] - n[i];
    }
    g2_series.emplace_back("g2_" + tag, std::move(g2));
    z_series.emplace_back("z_" + tag, std::move(z_literal));
    z_number_series.emplace_back("z_" + tag + "_number", std::move(z_number));
  }
  for (auto* group : {&g2_series, &z_series, &z_number_series}) {
    for (auto& [label, values] : *group) record.add_real_series(label, values);
  }
}

}  // namespace optomech
