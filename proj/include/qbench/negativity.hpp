#pragma once

// Negativity programs: the relaxed lower-bound minimization over truncated
// states, the equality-constrained hybrid upper bound, and the partial
// transpose machinery they share.

#include <memory>
#include <string>
#include <vector>

#include "qbench/backend.hpp"
#include "qbench/conic.hpp"
#include "qbench/constraints.hpp"
#include "qbench/ensemble.hpp"

namespace qbench {

/// Block (i, j) of the result is block (j, i) of `m`, for a d(N+1) square
/// matrix in A-major layout.
template <class Derived>
Matrix<typename Derived::Scalar> partial_transpose_A(const Eigen::MatrixBase<Derived>& m, int d, int N) {
  const int L = N + 1;
  if (d < 1 || N < 0 || m.rows() != d * L || m.cols() != d * L) {
    throw DimensionMismatch("partial transpose: " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            " matrix does not factor as d=" + std::to_string(d) + " by N+1=" + std::to_string(L));
  }
  Matrix<typename Derived::Scalar> out(m.rows(), m.cols());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.block(i * L, j * L, L, L) = m.block(j * L, i * L, L, L);
  return out;
}

template <class Scalar>
ExprMatrix<Scalar> partial_transpose_A(const ExprMatrix<Scalar>& m, int d, int N) {
  const int L = N + 1;
  if (d < 1 || N < 0 || m.rows() != d * L) {
    throw DimensionMismatch("partial transpose: expression matrix of size " + std::to_string(m.rows()) +
                            " does not factor as d=" + std::to_string(d) + " by N+1=" + std::to_string(L));
  }
  ExprMatrix<Scalar> out(m.rows());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < L; ++k)
        for (int l = 0; l < L; ++l) out(i * L + k, j * L + l) = m(j * L + k, i * L + l);
  return out;
}

struct NegativityVariables {
  int positive;
  int negative;
};

/// Adds tau_+, tau_- >= 0 with PT(sigma) = tau_+ - tau_- and sets the
/// objective to Tr tau_-.
template <class Scalar>
NegativityVariables negativity_objective(ConicModel<Scalar>& model, const ExprMatrix<Scalar>& sigma, int d, int N) {
  const ExprMatrix<Scalar> pt = partial_transpose_A(sigma, d, N);
  const int n = pt.rows();
  NegativityVariables v{model.add_variable(n, "tau+"), model.add_variable(n, "tau-")};
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      AffineExpr<Scalar> e = pt(r, c);
      e.add_term(v.positive, r, c, Scalar(-1));
      e.add_term(v.negative, r, c, Scalar(1));
      model.add_equality(std::move(e), "partial transpose");
    }
  }
  AffineExpr<Scalar> trace;
  for (int k = 0; k < n; ++k) trace.add_term(v.negative, k, k, Scalar(1));
  model.set_objective(std::move(trace));
  return v;
}

/// Negativity of a fixed matrix, solved as a program.
double negativity_by_sdp(const Eigen::MatrixXcd& sigma, int d, int N,
                         const SolverBackend& backend = *default_backend());

struct BenchmarkProblem {
  int N = 20;
  TestEnsemble ensemble;
  std::vector<MeasurementRecord> records;

  int d() const { return ensemble.size(); }
  /// Throws on a missing record, N < 2 or invalid records.
  void validate() const;
  /// True when rho_A and every mean amplitude are real, so the program can
  /// be posed over real symmetric matrices.
  bool is_real() const;
};

enum class BoundStatus { Optimal, Infeasible, NumericalTrouble };

const char* to_string(BoundStatus status);

struct BoundResult {
  double value = 0.0;
  BoundStatus status = BoundStatus::NumericalTrouble;
  double duality_gap = 0.0;
  Eigen::MatrixXcd sigma_N;
  int N = 0;
  int iterations = 0;
  bool reduced_accuracy = false;
  /// Largest violation of the model's constraints at the returned sigma_N.
  double max_violation = 0.0;
  std::string solver;
  std::string message;

  bool optimal() const { return status == BoundStatus::Optimal; }
};

/// Constraint family to use for the energy in the hybrid program.
enum class HybridEnergy {
  /// Only {1, a, d} and the rho_A traces, as measured.
  None,
  /// Additionally n_N <= weight * nbar.
  Bounded,
};

template <class Scalar>
struct BenchmarkModel {
  ConicModel<Scalar> model;
  int sigma = 0;
  NegativityVariables tau{};
};

template <class Scalar>
BenchmarkModel<Scalar> build_lower_bound_model(const BenchmarkProblem& problem) {
  problem.validate();
  const int d = problem.d();
  const int N = problem.N;
  const double w = 1.0 / d;
  BenchmarkModel<Scalar> out;
  auto& model = out.model;
  out.sigma = model.add_variable(d * (N + 1), "sigma");
  const auto handles = block_handles<Scalar>(out.sigma, d, N);

  AffineExpr<Scalar> slack(Scalar(1));
  for (int i = 0; i < d; ++i) slack -= handles[static_cast<size_t>(i * d + i)].trace();
  model.add_inequality(std::move(slack), "trace");

  for (int i = 0; i < d; ++i) {
    const DerivedMoments m = derive_moments(problem.records[static_cast<size_t>(i)]);
    add_block_constraints(model, handles[static_cast<size_t>(i * d + i)], m, w);
  }
  model.add_psd(rho_A_block_lmi(handles, build_rho_A(problem.ensemble)));
  out.tau = negativity_objective(model, model.variable(out.sigma), d, N);
  return out;
}

template <class Scalar>
BenchmarkModel<Scalar> build_hybrid_model(const BenchmarkProblem& problem, HybridEnergy energy) {
  problem.validate();
  const int d = problem.d();
  const int N = problem.N;
  const double w = 1.0 / d;
  BenchmarkModel<Scalar> out;
  auto& model = out.model;
  out.sigma = model.add_variable(d * (N + 1), "sigma");
  const auto handles = block_handles<Scalar>(out.sigma, d, N);
  const ReducedStateA rho_A = build_rho_A(problem.ensemble);

  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      // Tr S_ji = rho_A(i, j); the diagonal carries the block weight.
      Scalar c;
      if constexpr (is_complex_v<Scalar>) {
        c = rho_A.gram(i, j);
      } else {
        c = rho_A.gram(i, j).real();
      }
      if (j < i) continue;
      model.add_equality(handles[static_cast<size_t>(j * d + i)].trace() - AffineExpr<Scalar>(c), "rho_A");
    }
  }
  for (int i = 0; i < d; ++i) {
    const auto& h = handles[static_cast<size_t>(i * d + i)];
    const DerivedMoments m = derive_moments(problem.records[static_cast<size_t>(i)]);
    Scalar a;
    if constexpr (is_complex_v<Scalar>) {
      a = m.a_mean;
    } else {
      a = m.a_mean.real();
    }
    model.add_equality(h.annihilation() - AffineExpr<Scalar>(Scalar(w) * a), "mean");
    model.add_equality(h.difference() - AffineExpr<Scalar>(Scalar(w * m.d_mean)), "difference");
    if (energy == HybridEnergy::Bounded) {
      model.add_inequality(AffineExpr<Scalar>(Scalar(w * m.nbar)) - h.nbar(), "energy");
    }
  }
  out.tau = negativity_objective(model, model.variable(out.sigma), d, N);
  return out;
}

BoundResult solve_lower_bound(const BenchmarkProblem& problem, const SolverBackend& backend = *default_backend());

BoundResult solve_hybrid_upper(const BenchmarkProblem& problem, const SolverBackend& backend = *default_backend(),
                               HybridEnergy energy = HybridEnergy::Bounded);

/// Values above this count as nonzero negativity in reports.
inline constexpr double kZeroThreshold = 1e-5;

/// True iff the hybrid program is Optimal with value above kZeroThreshold.
/// A finite-cutoff approximation of the quantum domain from the inside.
bool quantum_domain_flag(const BenchmarkProblem& problem, const SolverBackend& backend = *default_backend());

}  // namespace qbench
