#pragma once

// Primal-dual interior-point solver for block-diagonal semidefinite programs
// in standard form
//
//   minimize    <C, X>
//   subject to  <A_i, X> = b_i,   X = diag(X_1, ..., X_K, x_lp),
//               X_k Hermitian PSD, x_lp >= 0,
//
// where <A, X> = Re tr(A X). Its dual is
//
//   maximize b^T y   subject to   sum_i y_i A_i + Z = C,  Z >= 0.
//
// Search directions are HKM with a Mehrotra predictor-corrector. The Schur
// complement is assembled entry by entry from the sparse A_i, which keeps the
// element-wise equality constraints produced by a partial transpose cheap.

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbench/affine.hpp"

namespace qbench {

template <class Scalar>
struct BlockEntry {
  int block;
  int row;
  int col;
  Scalar value;
};

/// One constraint matrix (or the cost). PSD entries are stored for both
/// triangles; the functional is Re sum(value * X(col, row)).
template <class Scalar>
struct SdpRow {
  std::vector<BlockEntry<Scalar>> psd;
  std::vector<std::pair<int, double>> lp;
};

template <class Scalar>
struct StandardSdp {
  std::vector<int> block_dims;
  int lp_dim = 0;
  std::vector<SdpRow<Scalar>> rows;
  Eigen::VectorXd rhs;
  SdpRow<Scalar> cost;

  int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class IpmStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIterations, NumericalTrouble };

const char* to_string(IpmStatus status);

struct IpmSettings {
  /// Target for relative gap, primal and dual infeasibility.
  double tolerance = 1e-9;
  /// A run that stalls with infeasibilities below fallback_tolerance and
  /// relative gap below fallback_gap is still reported Optimal, flagged as
  /// reduced accuracy. Problems whose feasible set has no interior (exact
  /// pure-state data) typically end here.
  double fallback_tolerance = 1e-6;
  double fallback_gap = 1e-4;
  /// Iterations without a 10% improvement before declaring a stall; only
  /// counted once the run is within 1e-3 of convergence.
  int stall_iterations = 8;
  double infeasibility_tolerance = 1e-8;
  int max_iterations = 150;
  bool predictor_corrector = true;
  /// Centering parameter when the corrector is disabled.
  double fixed_centering = 0.1;
  /// Stalled or failed runs with at most this many rows are retried from
  /// scratch in long double; 0 disables the retry.
  int extended_max_rows = 1500;
  bool verbose = false;
};

template <class Scalar>
struct IpmSolution {
  IpmStatus status = IpmStatus::NumericalTrouble;
  std::vector<Matrix<Scalar>> X;
  std::vector<Matrix<Scalar>> Z;
  Eigen::VectorXd x_lp;
  Eigen::VectorXd z_lp;
  Eigen::VectorXd y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool reduced_accuracy = false;
  bool extended_precision = false;
  std::string message;
};

template <class Scalar>
IpmSolution<Scalar> solve_standard_sdp(const StandardSdp<Scalar>& problem,
                                       const IpmSettings& settings = {});

extern template IpmSolution<double> solve_standard_sdp(const StandardSdp<double>&,
                                                       const IpmSettings&);
extern template IpmSolution<std::complex<double>> solve_standard_sdp(
    const StandardSdp<std::complex<double>>&, const IpmSettings&);

}  // namespace qbench
