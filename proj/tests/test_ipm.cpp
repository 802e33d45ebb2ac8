#include <doctest.h>

#include <random>

#include "qbench/backend.hpp"
#include "qbench/conic.hpp"
#include "qbench/errors.hpp"

using namespace qbench;

namespace {

// min <C, X> s.t. Tr X = 1, X >= 0 has value lambda_min(C).
template <class Scalar>
ConicModel<Scalar> min_eigenvalue_model(const Matrix<Scalar>& c) {
  ConicModel<Scalar> m;
  const int n = static_cast<int>(c.rows());
  const int x = m.add_variable(n, "X");
  AffineExpr<Scalar> tr(Scalar(-1));
  AffineExpr<Scalar> obj;
  for (int i = 0; i < n; ++i) {
    tr.add_term(x, i, i, Scalar(1));
    for (int j = 0; j < n; ++j) obj.add_term(x, j, i, c(i, j));
  }
  m.add_equality(tr);
  m.set_objective(obj);
  return m;
}

template <class Scalar>
Matrix<Scalar> random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix<Scalar> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if constexpr (is_complex_v<Scalar>) {
        a(i, j) = Scalar(g(rng), g(rng));
      } else {
        a(i, j) = g(rng);
      }
    }
  return (a + a.adjoint()) * 0.5;
}

template <class Scalar>
double lambda_min(const Matrix<Scalar>& c) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(c, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE_TEMPLATE("minimum eigenvalue as a program", Scalar, double, cplx) {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 5, 9}) {
    const Matrix<Scalar> c = random_hermitian<Scalar>(n, rng);
    const auto sol = solve_model(min_eigenvalue_model(c), *default_backend());
    REQUIRE(sol.raw.status == IpmStatus::Optimal);
    CHECK(sol.raw.primal_objective == doctest::Approx(lambda_min(c)).epsilon(1e-7));
    CHECK(sol.raw.dual_objective == doctest::Approx(lambda_min(c)).epsilon(1e-7));
    CHECK(std::real(sol.values[0].trace()) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("backends agree on complex programs") {
  std::mt19937_64 rng(8);
  const Matrix<cplx> c = random_hermitian<cplx>(6, rng);
  const auto a = solve_model(min_eigenvalue_model(c), *default_backend());
  const auto b = solve_model(min_eigenvalue_model(c), *alternate_backend());
  REQUIRE(b.raw.status == IpmStatus::Optimal);
  CHECK(a.raw.primal_objective == doctest::Approx(b.raw.primal_objective).epsilon(1e-7));
  // the embedded solution maps back to a Hermitian PSD matrix of unit trace
  CHECK((b.values[0] - b.values[0].adjoint()).norm() < 1e-12);
  CHECK(b.values[0].trace().real() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("off-diagonal equality with a trace objective") {
  // min X00 + X11 s.t. X01 = 1: optimum 2 at [[1, 1], [1, 1]].
  ConicModel<double> m;
  const int x = m.add_variable(2, "X");
  m.add_equality(AffineExpr<double>::entry(x, 0, 1) - AffineExpr<double>(1.0));
  AffineExpr<double> obj;
  obj.add_term(x, 0, 0, 1.0).add_term(x, 1, 1, 1.0);
  m.set_objective(obj);
  const auto sol = solve_model(m, *default_backend());
  REQUIRE(sol.raw.status == IpmStatus::Optimal);
  CHECK(sol.raw.primal_objective == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sol.values[0](0, 0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("inequalities and LMIs lower to slack blocks") {
  // min t s.t. [[t, 1], [1, t]] >= 0, t >= 0.5: optimum 1
  ConicModel<double> m;
  const int x = m.add_variable(1, "t");
  const auto t = AffineExpr<double>::entry(x, 0, 0);
  LmiFragment<double> f{"box", ExprMatrix<double>(2)};
  f.matrix(0, 0) = t;
  f.matrix(1, 1) = t;
  f.matrix(0, 1) = AffineExpr<double>(1.0);
  f.matrix(1, 0) = AffineExpr<double>(1.0);
  m.add_psd(f);
  m.add_inequality(t - AffineExpr<double>(0.5));
  m.set_objective(t);
  LoweringMap map;
  const StandardSdp<double> sdp = lower_model(m, &map);
  CHECK(sdp.block_dims.size() == 2);
  CHECK(sdp.lp_dim == 1);
  CHECK(map.lmi_blocks[0] == 1);
  const auto sol = solve_standard_sdp(sdp);
  REQUIRE(sol.status == IpmStatus::Optimal);
  CHECK(sol.primal_objective == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("infeasibility certificates") {
  SUBCASE("primal") {
    // X00 = -1 for a PSD X
    ConicModel<double> m;
    const int x = m.add_variable(1, "X");
    m.add_equality(AffineExpr<double>::entry(x, 0, 0) + AffineExpr<double>(1.0));
    m.set_objective(AffineExpr<double>::entry(x, 0, 0));
    CHECK(solve_model(m, *default_backend()).raw.status == IpmStatus::PrimalInfeasible);
  }
  SUBCASE("dual") {
    // min -X00 with X00 = X11 and nothing else: unbounded below
    ConicModel<double> m;
    const int x = m.add_variable(2, "X");
    m.add_equality(AffineExpr<double>::entry(x, 0, 0) - AffineExpr<double>::entry(x, 1, 1));
    m.set_objective(AffineExpr<double>::entry(x, 0, 0, -1.0));
    CHECK(solve_model(m, *default_backend()).raw.status == IpmStatus::DualInfeasible);
  }
}

TEST_CASE("lowering rejects malformed models") {
  ConicModel<double> m;
  const int x = m.add_variable(2, "X");
  m.add_equality(AffineExpr<double>::entry(x, 2, 0));
  CHECK_THROWS_AS(lower_model(m), DimensionMismatch);

  ConicModel<double> m2;
  m2.add_variable(2, "X");
  m2.add_equality(AffineExpr<double>::entry(3, 0, 0));
  CHECK_THROWS_AS(lower_model(m2), DimensionMismatch);

  ConicModel<double> m3;
  const int y = m3.add_variable(2, "X");
  LmiFragment<double> f{"skew", ExprMatrix<double>(2)};
  f.matrix(0, 1) = AffineExpr<double>::entry(y, 0, 0);
  m3.add_psd(f);
  CHECK_THROWS_AS(lower_model(m3), DimensionMismatch);

  ConicModel<double> m4;
  m4.add_variable(1, "X");
  m4.add_equality(AffineExpr<double>(1.0));
  CHECK_THROWS_AS(lower_model(m4), Error);

  CHECK_THROWS_AS(m4.add_variable(0, "empty"), DimensionMismatch);

  StandardSdp<double> bad;
  bad.block_dims = {1};
  bad.rows.resize(2);
  bad.rhs = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(solve_standard_sdp(bad), DimensionMismatch);
}

TEST_CASE("real embedding round trip") {
  std::mt19937_64 rng(3);
  const Matrix<cplx> h = random_hermitian<cplx>(4, rng);
  Eigen::MatrixXd e(8, 8);
  e << h.real(), -h.imag(), h.imag(), h.real();
  CHECK((unrealify(e) - h).norm() < 1e-15);

  StandardSdp<cplx> p;
  p.block_dims = {2};
  SdpRow<cplx> row;
  row.psd = {{0, 0, 1, cplx(0.5, 0.5)}, {0, 1, 0, cplx(0.5, -0.5)}};
  p.rows = {row};
  p.rhs = Eigen::VectorXd::Constant(1, 0.3);
  const StandardSdp<double> r = realify(p);
  CHECK(r.block_dims[0] == 4);
  CHECK(r.rhs(0) == 0.3);
}

TEST_CASE("a feasible set without interior still solves") {
  // Exact data with an empty interior: X = [[1, 1], [1, 1]] is the only
  // feasible point of X00 = X11 = X01 = 1.
  ConicModel<double> m;
  const int x = m.add_variable(2, "X");
  m.add_equality(AffineExpr<double>::entry(x, 0, 0) - AffineExpr<double>(1.0));
  m.add_equality(AffineExpr<double>::entry(x, 1, 1) - AffineExpr<double>(1.0));
  m.add_equality(AffineExpr<double>::entry(x, 0, 1) - AffineExpr<double>(1.0));
  m.set_objective(AffineExpr<double>::entry(x, 0, 1));
  const auto sol = solve_model(m, *default_backend());
  REQUIRE(sol.raw.status == IpmStatus::Optimal);
  CHECK(sol.raw.primal_objective == doctest::Approx(1.0).epsilon(1e-6));
}
