#pragma once

// Affine scalar expressions over the entries of Hermitian matrix variables,
// and square matrices of such expressions. Scalar is double or
// std::complex<double>.

#include <algorithm>
#include <complex>
#include <span>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "qbench/errors.hpp"

namespace qbench {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <class Scalar>
Scalar conj_if_complex(const Scalar& v) {
  if constexpr (is_complex_v<Scalar>) {
    return std::conj(v);
  } else {
    return v;
  }
}

template <class Scalar>
double real_part(const Scalar& v) {
  if constexpr (is_complex_v<Scalar>) {
    return v.real();
  } else {
    return v;
  }
}

/// coeff * X_var(row, col)
template <class Scalar>
struct VarEntry {
  int var;
  int row;
  int col;
  Scalar coeff;
};

template <class Scalar>
class AffineExpr {
 public:
  AffineExpr() = default;
  AffineExpr(Scalar constant) : constant_(constant) {}  // NOLINT(google-explicit-constructor)

  static AffineExpr entry(int var, int row, int col, Scalar coeff = Scalar(1)) {
    AffineExpr e;
    e.terms_.push_back({var, row, col, coeff});
    return e;
  }

  const Scalar& constant() const { return constant_; }
  const std::vector<VarEntry<Scalar>>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }

  AffineExpr& add_term(int var, int row, int col, Scalar coeff) {
    terms_.push_back({var, row, col, coeff});
    return *this;
  }

  AffineExpr& operator+=(const AffineExpr& o) {
    constant_ += o.constant_;
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  AffineExpr& operator-=(const AffineExpr& o) { return *this += -o; }
  AffineExpr& operator*=(Scalar s) {
    constant_ *= s;
    for (auto& t : terms_) t.coeff *= s;
    return *this;
  }

  friend AffineExpr operator-(AffineExpr e) { return e *= Scalar(-1); }
  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
  friend AffineExpr operator*(AffineExpr a, Scalar s) { return a *= s; }
  friend AffineExpr operator*(Scalar s, AffineExpr a) { return a *= s; }

  /// Complex conjugate, using X(q, p) = conj(X(p, q)) for Hermitian variables.
  AffineExpr adjoint() const {
    AffineExpr e(conj_if_complex(constant_));
    e.terms_.reserve(terms_.size());
    for (const auto& t : terms_) e.terms_.push_back({t.var, t.col, t.row, conj_if_complex(t.coeff)});
    return e;
  }

  /// Merges repeated entries and drops zero coefficients.
  AffineExpr canonical(double drop = 0.0) const {
    std::vector<VarEntry<Scalar>> sorted = terms_;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return std::tie(a.var, a.row, a.col) < std::tie(b.var, b.row, b.col);
    });
    AffineExpr e(constant_);
    for (const auto& t : sorted) {
      if (!e.terms_.empty()) {
        auto& last = e.terms_.back();
        if (last.var == t.var && last.row == t.row && last.col == t.col) {
          last.coeff += t.coeff;
          continue;
        }
      }
      e.terms_.push_back(t);
    }
    std::erase_if(e.terms_, [drop](const auto& t) { return std::abs(t.coeff) <= drop; });
    return e;
  }

  Scalar evaluate(std::span<const Matrix<Scalar>> values) const {
    Scalar acc = constant_;
    for (const auto& t : terms_) acc += t.coeff * values[static_cast<size_t>(t.var)](t.row, t.col);
    return acc;
  }

 private:
  Scalar constant_{};
  std::vector<VarEntry<Scalar>> terms_;
};

/// Square matrix whose cells are affine expressions.
template <class Scalar>
class ExprMatrix {
 public:
  ExprMatrix() = default;
  explicit ExprMatrix(int n) : n_(n), cells_(static_cast<size_t>(n) * static_cast<size_t>(n)) {}

  /// The matrix variable itself, cell (i, j) = X_var(i, j).
  static ExprMatrix of_variable(int var, int dim) {
    ExprMatrix m(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = AffineExpr<Scalar>::entry(var, i, j);
    return m;
  }

  static ExprMatrix constant(const Matrix<Scalar>& value) {
    ExprMatrix m(static_cast<int>(value.rows()));
    for (int i = 0; i < m.n_; ++i)
      for (int j = 0; j < m.n_; ++j) m(i, j) = AffineExpr<Scalar>(value(i, j));
    return m;
  }

  int rows() const { return n_; }

  AffineExpr<Scalar>& operator()(int i, int j) { return cells_[index(i, j)]; }
  const AffineExpr<Scalar>& operator()(int i, int j) const { return cells_[index(i, j)]; }

  Matrix<Scalar> evaluate(std::span<const Matrix<Scalar>> values) const {
    Matrix<Scalar> out(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out(i, j) = (*this)(i, j).evaluate(values);
    return out;
  }

  /// Structural check that cell (j, i) is the adjoint of cell (i, j).
  bool is_hermitian(double tol = 1e-14) const {
    for (int i = 0; i < n_; ++i) {
      for (int j = i; j < n_; ++j) {
        const auto lhs = (*this)(i, j).adjoint().canonical(tol);
        const auto rhs = (*this)(j, i).canonical(tol);
        if (std::abs(lhs.constant() - rhs.constant()) > tol) return false;
        if (lhs.terms().size() != rhs.terms().size()) return false;
        for (size_t k = 0; k < lhs.terms().size(); ++k) {
          const auto& a = lhs.terms()[k];
          const auto& b = rhs.terms()[k];
          if (a.var != b.var || a.row != b.row || a.col != b.col) return false;
          if (std::abs(a.coeff - b.coeff) > tol) return false;
        }
      }
    }
    return true;
  }

 private:
  size_t index(int i, int j) const {
    return static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j);
  }

  int n_ = 0;
  std::vector<AffineExpr<Scalar>> cells_;
};

}  // namespace qbench
