#pragma once

// Truncated single-mode operators and test-state amplitudes in the Fock basis
// {|0>, ..., |N>}. Conventions: hbar = 1, vacuum quadrature variance 1/2,
// x = (a^dag + a)/sqrt(2), p = i (a^dag - a)/sqrt(2).

#include <complex>
#include <variant>

#include <Eigen/Dense>

namespace qbench {

using cplx = std::complex<double>;

/// Square matrix of an operator truncated to Fock levels 0..N.
struct TruncatedOperator {
  Eigen::MatrixXcd entries;
  bool hermitian = false;

  int dim() const { return static_cast<int>(entries.rows()); }
  int cutoff() const { return dim() - 1; }
};

/// Amplitudes of a (possibly truncated) pure state on levels 0..N.
struct FockVector {
  Eigen::VectorXcd amplitudes;

  int dim() const { return static_cast<int>(amplitudes.size()); }
  double squared_norm() const { return amplitudes.squaredNorm(); }
};

struct CoherentState {
  cplx alpha;
};

/// sign = +1 squeezes x (Var(x) = e^{-2r}/2), sign = -1 squeezes p.
struct SqueezedVacuum {
  double r = 0.0;
  int sign = 1;
};

using TestStateSpec = std::variant<CoherentState, SqueezedVacuum>;

TruncatedOperator annihilation_matrix(int cutoff);

struct QuadratureSet {
  TruncatedOperator x;
  TruncatedOperator p;
  TruncatedOperator n;
  /// x^2 - p^2 = a^dag^2 + a^2, built from its own matrix elements.
  TruncatedOperator d;
};

QuadratureSet quadrature_matrices(int cutoff);

FockVector coherent_fock_vector(cplx alpha, int cutoff);

/// Global phase is fixed so that amplitude[0] > 0.
FockVector squeezed_vacuum_fock_vector(double r, int sign, int cutoff);

FockVector fock_vector(const TestStateSpec& state, int cutoff);

/// Exact inner product <a|b>. Pairs without a closed form fall back to a
/// truncated dot product whose neglected tail is below 1e-12.
cplx overlap(const TestStateSpec& a, const TestStateSpec& b);

/// Largest cutoff the numerical overlap fallback will try.
inline constexpr int kMaxOverlapCutoff = 2000;

}  // namespace qbench
