#pragma once

// Truncation-error constraints for one conditional block of the truncated
// state. Data arguments are moments of the normalized conditional state;
// `trace_total` is the weight of the block (1/d for a uniform ensemble) and
// scales every data term.

#include <cmath>
#include <vector>

#include "qbench/conic.hpp"
#include "qbench/ensemble.hpp"

namespace qbench {

/// Affine views of block (row_block, col_block) of a matrix variable laid out
/// as d x d blocks of size levels = N + 1.
template <class Scalar>
struct TruncatedBlockHandles {
  int var = 0;
  int row_block = 0;
  int col_block = 0;
  int levels = 1;

  int cutoff() const { return levels - 1; }

  AffineExpr<Scalar> element(int k, int l) const {
    return AffineExpr<Scalar>::entry(var, row_block * levels + k, col_block * levels + l);
  }

  /// Trace over Fock levels 0..upto.
  AffineExpr<Scalar> trace_upto(int upto) const {
    AffineExpr<Scalar> e;
    for (int k = 0; k <= upto && k < levels; ++k) e.add_term(var, row_block * levels + k, col_block * levels + k, Scalar(1));
    return e;
  }
  AffineExpr<Scalar> trace() const { return trace_upto(cutoff()); }

  /// Photon number restricted to levels 0..upto.
  AffineExpr<Scalar> nbar_upto(int upto) const {
    AffineExpr<Scalar> e;
    for (int k = 1; k <= upto && k < levels; ++k) {
      e.add_term(var, row_block * levels + k, col_block * levels + k, Scalar(k));
    }
    return e;
  }
  AffineExpr<Scalar> nbar() const { return nbar_upto(cutoff()); }

  /// Tr(S * op) for an operator on the truncated space.
  AffineExpr<Scalar> expectation(const Eigen::MatrixXcd& op) const {
    AffineExpr<Scalar> e;
    for (int k = 0; k < levels; ++k) {
      for (int l = 0; l < levels; ++l) {
        const cplx c = op(l, k);
        if (c == cplx(0.0)) continue;
        if constexpr (is_complex_v<Scalar>) {
          e.add_term(var, row_block * levels + k, col_block * levels + l, c);
        } else {
          e.add_term(var, row_block * levels + k, col_block * levels + l, c.real());
        }
      }
    }
    return e;
  }

  /// Tr(S a) = sum_k sqrt(k) S(k, k-1).
  AffineExpr<Scalar> annihilation() const {
    AffineExpr<Scalar> e;
    for (int k = 1; k < levels; ++k) {
      e.add_term(var, row_block * levels + k, col_block * levels + k - 1, Scalar(std::sqrt(double(k))));
    }
    return e;
  }

  /// Tr(S d) with d = a^2 + a^dag^2.
  AffineExpr<Scalar> difference() const {
    AffineExpr<Scalar> e;
    for (int k = 0; k + 2 < levels; ++k) {
      const Scalar c(std::sqrt(double(k + 1) * double(k + 2)));
      e.add_term(var, row_block * levels + k + 2, col_block * levels + k, c);
      e.add_term(var, row_block * levels + k, col_block * levels + k + 2, c);
    }
    return e;
  }
};

template <class Scalar>
std::vector<TruncatedBlockHandles<Scalar>> block_handles(int var, int d, int cutoff) {
  std::vector<TruncatedBlockHandles<Scalar>> out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.push_back({var, i, j, cutoff + 1});
  return out;
}

/// Below this the data is treated as exact vacuum and the fragments pinned.
inline constexpr double kVacuumEnergy = 1e-12;

/// (w nbar - nbar_N) - (N + 1)(w - Tr S) >= 0, plus 0 <= nbar_N <= w nbar and
/// Tr S <= w. Vacuum data turns the bounds into Tr S = w, nbar_N = 0.
template <class Scalar>
std::vector<LinearConstraint<Scalar>> cutoff_lemma_constraint(const TruncatedBlockHandles<Scalar>& block,
                                                              double nbar, double trace_total, int N) {
  if (N < 1) throw CutoffTooSmall("cutoff lemma needs N >= 1, got " + std::to_string(N));
  if (!(nbar >= 0.0)) throw RangeError("nbar", "must be >= 0");
  if (!(trace_total > 0.0 && trace_total <= 1.0)) throw RangeError("trace_total", "must lie in (0, 1]");
  using C = LinearConstraint<Scalar>;
  const auto ge = C::Kind::GreaterEqual;
  const auto eq = C::Kind::Equal;
  const AffineExpr<Scalar> energy_gap = AffineExpr<Scalar>(Scalar(trace_total * nbar)) - block.nbar_upto(N);
  const AffineExpr<Scalar> trace_gap = AffineExpr<Scalar>(Scalar(trace_total)) - block.trace_upto(N);
  if (nbar <= kVacuumEnergy) {
    return {C{eq, trace_gap, "trace"}, C{eq, block.nbar_upto(N), "energy"}};
  }
  return {
      C{ge, energy_gap - trace_gap * Scalar(N + 1), "cutoff lemma"},
      C{ge, energy_gap, "energy"},
      C{ge, block.nbar_upto(N), "energy >= 0"},
      C{ge, trace_gap, "trace"},
  };
}

template <class Scalar>
LmiFragment<Scalar> first_order_lmi(const TruncatedBlockHandles<Scalar>& block, cplx a_mean, double nbar,
                                    double trace_total) {
  const int N = block.cutoff();
  if (N < 1) throw CutoffTooSmall("first-order bound needs N >= 1, got " + std::to_string(N));
  Scalar a;
  if constexpr (is_complex_v<Scalar>) {
    a = a_mean;
  } else {
    if (a_mean.imag() != 0.0) throw DimensionMismatch("complex mean amplitude in a real model");
    a = a_mean.real();
  }
  LmiFragment<Scalar> f{"first order", ExprMatrix<Scalar>(2), nbar <= kVacuumEnergy};
  f.matrix(0, 0) = AffineExpr<Scalar>(Scalar(trace_total * nbar)) - block.nbar_upto(N);
  f.matrix(0, 1) = AffineExpr<Scalar>(Scalar(trace_total) * a) - block.annihilation();
  f.matrix(1, 0) = f.matrix(0, 1).adjoint();
  f.matrix(1, 1) = AffineExpr<Scalar>(Scalar(trace_total)) - block.trace_upto(N - 1);
  return f;
}

template <class Scalar>
LmiFragment<Scalar> second_order_lmi(const TruncatedBlockHandles<Scalar>& block, double d_mean, double nbar,
                                     double trace_total) {
  const int N = block.cutoff();
  if (N < 2) throw CutoffTooSmall("second-order bound needs N >= 2, got " + std::to_string(N));
  LmiFragment<Scalar> f{"second order", ExprMatrix<Scalar>(2), nbar <= kVacuumEnergy};
  f.matrix(0, 0) = (AffineExpr<Scalar>(Scalar(trace_total * nbar)) - block.nbar_upto(N)) * Scalar(4);
  f.matrix(0, 1) = AffineExpr<Scalar>(Scalar(trace_total * d_mean)) - block.difference();
  f.matrix(1, 0) = f.matrix(0, 1).adjoint();
  f.matrix(1, 1) = AffineExpr<Scalar>(Scalar(trace_total * (nbar + 1.0))) - block.nbar_upto(N - 2) -
                   block.trace_upto(N - 2);
  return f;
}

/// rho_A - rho_NA >= 0, where rho_NA(i, j) = Tr S_ji. `blocks` is indexed
/// i * d + j.
template <class Scalar>
LmiFragment<Scalar> rho_A_block_lmi(const std::vector<TruncatedBlockHandles<Scalar>>& blocks,
                                    const ReducedStateA& rho_A) {
  const int d = rho_A.dim();
  if (static_cast<int>(blocks.size()) != d * d) {
    throw DimensionMismatch("rho_A is " + std::to_string(d) + "x" + std::to_string(d) + " but " +
                            std::to_string(blocks.size()) + " block handles were given");
  }
  LmiFragment<Scalar> f{"rho_A", ExprMatrix<Scalar>(d), false};
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto& h = blocks[static_cast<size_t>(j * d + i)];
      if (h.row_block != j || h.col_block != i) throw DimensionMismatch("block handles out of order");
      Scalar c;
      if constexpr (is_complex_v<Scalar>) {
        c = rho_A.gram(i, j);
      } else {
        c = rho_A.gram(i, j).real();
      }
      f.matrix(i, j) = AffineExpr<Scalar>(c) - h.trace();
    }
  }
  return f;
}

/// All per-block moment constraints for one diagonal block.
template <class Scalar>
void add_block_constraints(ConicModel<Scalar>& model, const TruncatedBlockHandles<Scalar>& block,
                           const DerivedMoments& m, double weight) {
  const int N = block.cutoff();
  for (auto& c : cutoff_lemma_constraint(block, m.nbar, weight, N)) model.add(std::move(c));
  model.add_psd(first_order_lmi(block, m.a_mean, m.nbar, weight));
  model.add_psd(second_order_lmi(block, m.d_mean, m.nbar, weight));
}

}  // namespace qbench
