#include "qbench/negativity.hpp"

#include <algorithm>
#include <cmath>

namespace qbench {

namespace {

constexpr double kRealTolerance = 1e-14;

BoundStatus classify(IpmStatus s) {
  switch (s) {
    case IpmStatus::Optimal:
      return BoundStatus::Optimal;
    case IpmStatus::PrimalInfeasible:
      return BoundStatus::Infeasible;
    default:
      return BoundStatus::NumericalTrouble;
  }
}

template <class Scalar>
Eigen::MatrixXcd to_complex(const Matrix<Scalar>& m) {
  return m.template cast<cplx>();
}

// Lower bounds report the dual objective: any dual-feasible point certifies
// it. Upper bounds report the primal objective of the returned sigma_N,
// except when a stalled run leaves the primal slightly infeasible and below
// the dual value; the dual value is then the closer estimate.
template <class Scalar>
BoundResult solve_benchmark(const BenchmarkModel<Scalar>& bm, const SolverBackend& backend, int N, bool lower) {
  const ModelSolution<Scalar> sol = solve_model(bm.model, backend);
  BoundResult r;
  r.N = N;
  r.status = classify(sol.raw.status);
  r.iterations = sol.raw.iterations;
  r.reduced_accuracy = sol.raw.reduced_accuracy;
  r.duality_gap = sol.raw.primal_objective - sol.raw.dual_objective;
  r.solver = backend.name();
  r.message = sol.raw.message;
  if (r.status != BoundStatus::Optimal) {
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double constant = real_part(bm.model.objective().constant());
  const double objective =
      lower ? sol.raw.dual_objective : std::max(sol.raw.primal_objective, sol.raw.dual_objective);
  r.value = std::max(0.0, objective + constant);
  r.sigma_N = to_complex<Scalar>(sol.values[static_cast<size_t>(bm.sigma)]);
  r.max_violation = bm.model.max_violation(sol.values);
  return r;
}

}  // namespace

const char* to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::Optimal:
      return "Optimal";
    case BoundStatus::Infeasible:
      return "Infeasible";
    case BoundStatus::NumericalTrouble:
      return "NumericalTrouble";
  }
  return "?";
}

void BenchmarkProblem::validate() const {
  if (N < 2) throw RangeError("N", "must be >= 2, got " + std::to_string(N));
  if (static_cast<int>(records.size()) != ensemble.size()) {
    throw DimensionMismatch(std::to_string(ensemble.size()) + " test states but " +
                            std::to_string(records.size()) + " measurement records");
  }
  for (const auto& r : records) r.validate();
}

bool BenchmarkProblem::is_real() const {
  const ReducedStateA rho = build_rho_A(ensemble);
  if (rho.gram.imag().cwiseAbs().maxCoeff() > kRealTolerance) return false;
  return std::all_of(records.begin(), records.end(),
                     [](const MeasurementRecord& r) { return std::abs(r.mean_p) <= kRealTolerance; });
}

double negativity_by_sdp(const Eigen::MatrixXcd& sigma, int d, int N, const SolverBackend& backend) {
  ConicModel<cplx> model;
  negativity_objective(model, ExprMatrix<cplx>::constant(sigma), d, N);
  const ModelSolution<cplx> sol = solve_model(model, backend);
  if (sol.raw.status != IpmStatus::Optimal) {
    throw Error(std::string("negativity program ended with status ") + to_string(sol.raw.status) + ": " +
                sol.raw.message);
  }
  return sol.raw.primal_objective;
}

BoundResult solve_lower_bound(const BenchmarkProblem& problem, const SolverBackend& backend) {
  if (problem.is_real()) {
    return solve_benchmark(build_lower_bound_model<double>(problem), backend, problem.N, true);
  }
  return solve_benchmark(build_lower_bound_model<cplx>(problem), backend, problem.N, true);
}

BoundResult solve_hybrid_upper(const BenchmarkProblem& problem, const SolverBackend& backend, HybridEnergy energy) {
  if (problem.is_real()) {
    return solve_benchmark(build_hybrid_model<double>(problem, energy), backend, problem.N, false);
  }
  return solve_benchmark(build_hybrid_model<cplx>(problem, energy), backend, problem.N, false);
}

bool quantum_domain_flag(const BenchmarkProblem& problem, const SolverBackend& backend) {
  const BoundResult r = solve_hybrid_upper(problem, backend);
  return r.optimal() && r.value > kZeroThreshold;
}

}  // namespace qbench
