#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qbench/errors.hpp"
#include "qbench/negativity.hpp"

using namespace qbench;

namespace {

Eigen::MatrixXcd bell() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

BenchmarkProblem channel_problem(double overlap, double T, double vex, int N) {
  const TestEnsemble e = two_coherent_ensemble(overlap);
  return {N, e, simulate_channel(e, {T, vex})};
}

}  // namespace

TEST_CASE("partial transpose matches the index-level oracle and is an involution") {
  std::mt19937_64 rng(1);
  for (auto [d, N] : {std::pair{2, 1}, {3, 2}, {2, 4}}) {
    const Eigen::MatrixXcd m = oracle::random_density(d * (N + 1), rng);
    const Eigen::MatrixXcd pt = partial_transpose_A(m, d, N);
    CHECK((pt - oracle::partial_transpose_first(m, d, N + 1)).norm() < 1e-15);
    CHECK((partial_transpose_A(pt, d, N) - m).norm() < 1e-15);
    CHECK(pt.trace().real() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(partial_transpose_A(Eigen::MatrixXcd::Identity(5, 5), 2, 2), DimensionMismatch);
  CHECK_THROWS_AS(partial_transpose_A(ExprMatrix<double>(5), 2, 2), DimensionMismatch);
}

TEST_CASE("negativity program on textbook states") {
  CHECK(negativity_by_sdp(bell(), 2, 1) == doctest::Approx(0.5).epsilon(1e-6));
  const double p = 0.6;
  const Eigen::MatrixXcd werner = p * bell() + (1 - p) * Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  CHECK(oracle::eigen_negativity(werner, 2, 2) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(negativity_by_sdp(werner, 2, 1) == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("property: negativity program agrees with eigenvalues and scales linearly") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + trial % 2;
    const int N = 1 + trial % 3;
    const Eigen::MatrixXcd rho = oracle::random_density(d * (N + 1), rng, 1 + trial % 3);
    const double ref = oracle::eigen_negativity(rho, d, N + 1);
    CHECK(negativity_by_sdp(rho, d, N) == doctest::Approx(ref).epsilon(1e-6));
    CHECK(negativity_by_sdp(0.5 * rho, d, N) == doctest::Approx(0.5 * ref).epsilon(1e-6));
  }
  // separable inputs
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXcd rho = oracle::random_product(2, 3, rng);
    CHECK(negativity_by_sdp(rho, 2, 2) < 1e-7);
  }
}

TEST_CASE("benchmark problem validation") {
  const TestEnsemble e = two_coherent_ensemble(0.5);
  BenchmarkProblem p{1, e, simulate_channel(e, {})};
  CHECK_THROWS_AS(p.validate(), RangeError);
  p.N = 4;
  p.records.pop_back();
  CHECK_THROWS_AS(p.validate(), DimensionMismatch);
  CHECK_THROWS_AS(solve_lower_bound(p), DimensionMismatch);

  CHECK(channel_problem(0.5, 1.0, 0.0, 4).is_real());
  const TestEnsemble ring = three_coherent_ring_ensemble(0.3);
  CHECK_FALSE(BenchmarkProblem{4, ring, simulate_channel(ring, {})}.is_real());
}

TEST_CASE("lossless bounds sit near the pure-state negativity") {
  const double overlap = 0.6;
  const double alpha = oracle::amplitude_for_overlap(overlap);
  const double ref = oracle::span_negativity(oracle::coherent_gram({alpha, -alpha}));
  CHECK(ref == doctest::Approx(0.4).epsilon(1e-12));
  const BenchmarkProblem p = channel_problem(overlap, 1.0, 0.0, 8);
  const BoundResult lo = solve_lower_bound(p);
  const BoundResult hi = solve_hybrid_upper(p);
  REQUIRE(lo.optimal());
  REQUIRE(hi.optimal());
  CHECK(lo.value <= ref + 1e-6);
  CHECK(lo.value == doctest::Approx(ref).epsilon(1e-3));
  CHECK(hi.value == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("lower bound never exceeds the hybrid upper bound") {
  for (auto [s, vex] : {std::pair{0.6, 0.1}, {0.3, 0.05}, {0.8, 0.3}}) {
    const BenchmarkProblem p = channel_problem(s, 0.8, vex, 6);
    const BoundResult lo = solve_lower_bound(p);
    const BoundResult hi = solve_hybrid_upper(p);
    REQUIRE(lo.optimal());
    REQUIRE(hi.optimal());
    CHECK(lo.value >= 0.0);
    CHECK(lo.value <= hi.value + 1e-6);
    CHECK(lo.max_violation < 1e-6);
    CHECK(lo.sigma_N.rows() == 14);
  }
}

TEST_CASE("classical records give zero") {
  const TestEnsemble e = two_coherent_ensemble(0.5);
  const BenchmarkProblem p{6, e, intercept_resend(e, 1.0)};
  const BoundResult lo = solve_lower_bound(p);
  REQUIRE(lo.optimal());
  CHECK(lo.value < 1e-5);
  CHECK_FALSE(quantum_domain_flag(p));
}

TEST_CASE("dropping the energy bound from the hybrid program only loosens it") {
  const BenchmarkProblem p = channel_problem(0.6, 1.0, 0.1, 6);
  const BoundResult bounded = solve_hybrid_upper(p, *default_backend(), HybridEnergy::Bounded);
  const BoundResult loose = solve_hybrid_upper(p, *default_backend(), HybridEnergy::None);
  REQUIRE(bounded.optimal());
  REQUIRE(loose.optimal());
  CHECK(loose.value <= bounded.value + 1e-6);
}

TEST_CASE("status names") {
  CHECK(std::string(to_string(BoundStatus::Optimal)) == "Optimal");
  CHECK(std::string(to_string(BoundStatus::Infeasible)) == "Infeasible");
  CHECK(std::string(to_string(BoundStatus::NumericalTrouble)) == "NumericalTrouble");
}
