#pragma once

// A small conic modelling layer: Hermitian PSD matrix variables, affine
// scalar relations, affine matrix inequalities and an affine objective,
// lowered to the standard form consumed by the interior-point solver.

#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qbench/affine.hpp"
#include "qbench/ipm.hpp"

namespace qbench {

/// Matrix of affine expressions required to be PSD. When `pinned` is set the
/// leading diagonal cell is forced to zero elsewhere in the model, so the
/// rest of the first row must vanish: it is imposed as equalities and only
/// the trailing submatrix goes into a cone.
template <class Scalar>
struct LmiFragment {
  std::string label;
  ExprMatrix<Scalar> matrix;
  bool pinned = false;

  int size() const { return matrix.rows(); }
};

template <class Scalar>
struct LinearConstraint {
  enum class Kind { Equal, GreaterEqual };
  Kind kind = Kind::GreaterEqual;
  AffineExpr<Scalar> expr;
  std::string label;
};

struct VariableInfo {
  int dim;
  std::string name;
};

template <class Scalar>
class ConicModel {
 public:
  /// Declares a Hermitian PSD matrix variable and returns its index.
  int add_variable(int dim, std::string name) {
    if (dim < 1) throw DimensionMismatch("variable '" + name + "' must have dim >= 1");
    variables_.push_back({dim, std::move(name)});
    return static_cast<int>(variables_.size()) - 1;
  }

  ExprMatrix<Scalar> variable(int var) const {
    return ExprMatrix<Scalar>::of_variable(var, variables_.at(static_cast<size_t>(var)).dim);
  }

  void add_psd(LmiFragment<Scalar> fragment) { psd_.push_back(std::move(fragment)); }

  /// expr == 0. Complex expressions constrain both real and imaginary parts.
  void add_equality(AffineExpr<Scalar> expr, std::string label = {}) {
    equalities_.push_back({LinearConstraint<Scalar>::Kind::Equal, std::move(expr), std::move(label)});
  }

  /// Re(expr) >= 0.
  void add_inequality(AffineExpr<Scalar> expr, std::string label = {}) {
    inequalities_.push_back(
        {LinearConstraint<Scalar>::Kind::GreaterEqual, std::move(expr), std::move(label)});
  }

  void add(LinearConstraint<Scalar> c) {
    if (c.kind == LinearConstraint<Scalar>::Kind::Equal) {
      equalities_.push_back(std::move(c));
    } else {
      inequalities_.push_back(std::move(c));
    }
  }

  /// Minimize Re(expr).
  void set_objective(AffineExpr<Scalar> expr) { objective_ = std::move(expr); }

  const std::vector<VariableInfo>& variables() const { return variables_; }
  const std::vector<LmiFragment<Scalar>>& psd_constraints() const { return psd_; }
  const std::vector<LinearConstraint<Scalar>>& eq_constraints() const { return equalities_; }
  const std::vector<LinearConstraint<Scalar>>& ineq_constraints() const { return inequalities_; }
  const AffineExpr<Scalar>& objective() const { return objective_; }

  /// Throws DimensionMismatch if anything references an undeclared variable
  /// or an out-of-range entry, or if an LMI is not Hermitian.
  void validate() const {
    auto check = [this](const AffineExpr<Scalar>& e, const std::string& where) {
      for (const auto& t : e.terms()) {
        if (t.var < 0 || t.var >= static_cast<int>(variables_.size())) {
          throw DimensionMismatch(where + ": reference to undeclared variable " +
                                  std::to_string(t.var));
        }
        const int dim = variables_[static_cast<size_t>(t.var)].dim;
        if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim) {
          throw DimensionMismatch(where + ": entry (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ") outside variable '" +
                                  variables_[static_cast<size_t>(t.var)].name + "'");
        }
      }
    };
    check(objective_, "objective");
    for (const auto& c : equalities_) check(c.expr, "equality " + c.label);
    for (const auto& c : inequalities_) check(c.expr, "inequality " + c.label);
    for (const auto& f : psd_) {
      for (int i = 0; i < f.size(); ++i)
        for (int j = 0; j < f.size(); ++j) check(f.matrix(i, j), "lmi " + f.label);
      if (!f.matrix.is_hermitian(1e-12)) {
        throw DimensionMismatch("lmi " + f.label + " is not Hermitian");
      }
    }
  }

  /// Largest violation of any constraint at the given variable values
  /// (PSD-ness of the variables is included).
  double max_violation(std::span<const Matrix<Scalar>> values) const {
    double worst = 0.0;
    for (size_t v = 0; v < variables_.size(); ++v) {
      worst = std::max(worst, -min_eigenvalue(values[v]));
    }
    for (const auto& c : equalities_) worst = std::max(worst, std::abs(c.expr.evaluate(values)));
    for (const auto& c : inequalities_) {
      worst = std::max(worst, -real_part(c.expr.evaluate(values)));
    }
    for (const auto& f : psd_) worst = std::max(worst, -min_eigenvalue(f.matrix.evaluate(values)));
    return worst;
  }

  static double min_eigenvalue(const Matrix<Scalar>& m) {
    const Matrix<Scalar> h = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(h, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
  }

 private:
  std::vector<VariableInfo> variables_;
  std::vector<LmiFragment<Scalar>> psd_;
  std::vector<LinearConstraint<Scalar>> equalities_;
  std::vector<LinearConstraint<Scalar>> inequalities_;
  AffineExpr<Scalar> objective_;
};

/// Block layout of a lowered model: variables come first, one slack block
/// per LMI after them, and one LP slack per inequality.
struct LoweringMap {
  int num_variables = 0;
  std::vector<int> lmi_blocks;
  int dropped_rows = 0;
};

namespace detail {

template <class Scalar>
class RowBuilder {
 public:
  // Adds Re(coeff * X_block(row, col)) to the functional.
  void add(int block, int row, int col, Scalar coeff) {
    acc_[{block, col, row}] += coeff * 0.5;
    acc_[{block, row, col}] += conj_if_complex(coeff) * 0.5;
  }

  void add_lp(int col, double a) { lp_[col] += a; }

  void add_expr(const AffineExpr<Scalar>& e, Scalar factor) {
    for (const auto& t : e.terms()) add(t.var, t.row, t.col, factor * t.coeff);
  }

  SdpRow<Scalar> build(double drop = 1e-15) const {
    SdpRow<Scalar> row;
    for (const auto& [key, v] : acc_) {
      if (std::abs(v) > drop) row.psd.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
    }
    for (const auto& [col, a] : lp_) {
      if (std::abs(a) > drop) row.lp.push_back({col, a});
    }
    return row;
  }

 private:
  std::map<std::tuple<int, int, int>, Scalar> acc_;
  std::map<int, double> lp_;
};

}  // namespace detail

/// Lowers the model to standard form. Equality rows whose functional
/// vanishes identically are dropped when their right-hand side is zero
/// (e.g. the imaginary part of a real-valued expression).
template <class Scalar>
StandardSdp<Scalar> lower_model(const ConicModel<Scalar>& model, LoweringMap* map = nullptr) {
  model.validate();
  StandardSdp<Scalar> sdp;
  LoweringMap layout;
  layout.num_variables = static_cast<int>(model.variables().size());
  for (const auto& v : model.variables()) sdp.block_dims.push_back(v.dim);

  std::vector<SdpRow<Scalar>> rows;
  std::vector<double> rhs;

  // Adds Re(factor * expr) (+ lp slack) = 0 as a row.
  auto push = [&](const AffineExpr<Scalar>& expr, Scalar factor, int slack_col, int slack_block,
                  int slack_row, int slack_col_idx, Scalar slack_coeff) {
    detail::RowBuilder<Scalar> rb;
    rb.add_expr(expr, factor);
    if (slack_col >= 0) rb.add_lp(slack_col, -1.0);
    if (slack_block >= 0) rb.add(slack_block, slack_row, slack_col_idx, slack_coeff);
    SdpRow<Scalar> row = rb.build();
    const double b = -real_part(factor * expr.constant());
    if (row.psd.empty() && row.lp.empty()) {
      if (std::abs(b) > 1e-12) {
        throw Error("lower_model: constant constraint 0 = " + std::to_string(b) +
                    " is infeasible");
      }
      ++layout.dropped_rows;
      return;
    }
    rows.push_back(std::move(row));
    rhs.push_back(b);
  };
  const Scalar one(1);
  auto imag_factor = []() {
    if constexpr (is_complex_v<Scalar>) {
      return Scalar(0.0, -1.0);  // Re(-i z) = Im z
    } else {
      return Scalar(0);
    }
  };

  auto push_equality = [&](const AffineExpr<Scalar>& e) {
    push(e, one, -1, -1, 0, 0, Scalar(0));
    if constexpr (is_complex_v<Scalar>) push(e, imag_factor(), -1, -1, 0, 0, Scalar(0));
  };
  int lp_dim = 0;
  auto push_inequality = [&](const AffineExpr<Scalar>& e) {
    push(e, one, lp_dim++, -1, 0, 0, Scalar(0));
  };

  for (const auto& c : model.eq_constraints()) push_equality(c.expr);
  for (const auto& c : model.ineq_constraints()) push_inequality(c.expr);

  for (const auto& f : model.psd_constraints()) {
    const int k = f.size();
    if (f.pinned) {
      for (int j = 1; j < k; ++j) push_equality(f.matrix(0, j));
      if (k <= 2) {
        if (k == 2) push_inequality(f.matrix(1, 1));
        layout.lmi_blocks.push_back(-1);
        continue;
      }
    }
    const int first = f.pinned ? 1 : 0;
    const int dim = k - first;
    const int block = static_cast<int>(sdp.block_dims.size());
    sdp.block_dims.push_back(dim);
    layout.lmi_blocks.push_back(block);
    // S(i, j) - F(i, j) = 0 for i <= j.
    for (int i = first; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        const AffineExpr<Scalar> cell = f.matrix(i, j);
        // Re part: Re(S_ij) - Re(F_ij) = 0.
        {
          detail::RowBuilder<Scalar> rb;
          rb.add_expr(cell, Scalar(-1));
          rb.add(block, i - first, j - first, one);
          rows.push_back(rb.build());
          rhs.push_back(real_part(cell.constant()));
        }
        if constexpr (is_complex_v<Scalar>) {
          if (i != j) {
            detail::RowBuilder<Scalar> rb;
            rb.add_expr(cell, Scalar(-1) * imag_factor());
            rb.add(block, i - first, j - first, imag_factor());
            rows.push_back(rb.build());
            rhs.push_back(real_part(imag_factor() * cell.constant()));
          }
        }
      }
    }
  }

  sdp.lp_dim = lp_dim;
  sdp.rows = std::move(rows);
  sdp.rhs = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  detail::RowBuilder<Scalar> cost;
  cost.add_expr(model.objective(), one);
  sdp.cost = cost.build();
  if (map) *map = layout;
  return sdp;
}

}  // namespace qbench
