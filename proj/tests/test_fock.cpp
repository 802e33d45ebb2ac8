#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qbench/fock.hpp"

using namespace qbench;

TEST_CASE("annihilation matrix has sqrt(k) on the superdiagonal") {
  const TruncatedOperator a = annihilation_matrix(7);
  CHECK(a.dim() == 8);
  CHECK(a.cutoff() == 7);
  CHECK((a.entries - oracle::lowering(7)).norm() == doctest::Approx(0.0));
}

TEST_CASE("quadrature operators in the vacuum-variance-1/2 convention") {
  const int n = 12;
  const QuadratureSet q = quadrature_matrices(n);
  const Eigen::MatrixXcd a = oracle::lowering(n);
  const Eigen::MatrixXcd ad = a.adjoint();
  CHECK((q.x.entries - (ad + a) / std::sqrt(2.0)).norm() < 1e-14);
  CHECK((q.p.entries - cplx(0, 1) * (ad - a) / std::sqrt(2.0)).norm() < 1e-14);
  CHECK((q.n.entries - ad * a).norm() < 1e-14);
  // d is built from its own elements, so it is exact up to the edge
  CHECK((q.d.entries - (a * a + ad * ad)).norm() < 1e-13);
  CHECK(q.x.hermitian);
  CHECK(q.d.hermitian);

  // <0|x^2|0> = 1/2
  CHECK((q.x.entries * q.x.entries)(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("coherent amplitudes match the displaced vacuum") {
  for (cplx alpha : {cplx(0.0), cplx(0.3, 0.0), cplx(-1.1, 0.4), cplx(0.2, -1.5)}) {
    const FockVector v = coherent_fock_vector(alpha, 60);
    const Eigen::VectorXcd ref = oracle::displaced_vacuum(alpha, 60);
    CHECK((v.amplitudes - ref).norm() < 1e-12);
  }
}

TEST_CASE("squeezed amplitudes match exp of the squeeze generator") {
  for (double r : {0.1, 0.35, 0.5}) {
    for (int sign : {1, -1}) {
      const FockVector v = squeezed_vacuum_fock_vector(r, sign, 60);
      const Eigen::VectorXcd ref = oracle::squeezed_vacuum(sign * r, 60);
      CHECK((v.amplitudes - ref).norm() < 1e-11);
      CHECK(v.amplitudes(0).real() > 0.0);
      // odd levels are empty
      for (int k = 1; k < v.dim(); k += 2) CHECK(std::abs(v.amplitudes(k)) == 0.0);
    }
  }
}

TEST_CASE("squeezing sign selects the squeezed quadrature") {
  const double r = 0.4;
  const QuadratureSet q = quadrature_matrices(60);
  const Eigen::VectorXcd vx = squeezed_vacuum_fock_vector(r, 1, 60).amplitudes;
  const Eigen::VectorXcd vp = squeezed_vacuum_fock_vector(r, -1, 60).amplitudes;
  auto var = [](const Eigen::VectorXcd& v, const Eigen::MatrixXcd& op) {
    return (v.adjoint() * op * op * v)(0).real();
  };
  CHECK(var(vx, q.x.entries) == doctest::Approx(0.5 * std::exp(-2 * r)).epsilon(1e-10));
  CHECK(var(vx, q.p.entries) == doctest::Approx(0.5 * std::exp(2 * r)).epsilon(1e-10));
  CHECK(var(vp, q.x.entries) == doctest::Approx(0.5 * std::exp(2 * r)).epsilon(1e-10));
}

TEST_CASE("overlaps agree with the oracle for every pair type") {
  const std::vector<TestStateSpec> states = {CoherentState{cplx(0.4, 0.1)}, CoherentState{cplx(-0.7, 0.3)},
                                             SqueezedVacuum{0.3, 1}, SqueezedVacuum{0.45, -1}};
  std::vector<Eigen::VectorXcd> ref = {oracle::displaced_vacuum(cplx(0.4, 0.1)),
                                       oracle::displaced_vacuum(cplx(-0.7, 0.3)), oracle::squeezed_vacuum(0.3),
                                       oracle::squeezed_vacuum(-0.45)};
  for (size_t i = 0; i < states.size(); ++i) {
    for (size_t j = 0; j < states.size(); ++j) {
      const cplx expect = ref[i].dot(ref[j]);
      CHECK(std::abs(overlap(states[i], states[j]) - expect) < 1e-11);
    }
  }
  CHECK(std::abs(overlap(states[0], states[1]) - oracle::coherent_overlap(cplx(0.4, 0.1), cplx(-0.7, 0.3))) <
        1e-15);
}

TEST_CASE("property: truncated coherent vectors have Poisson weights") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    const cplx alpha(u(rng), u(rng));
    const int N = 2 + trial % 20;
    const FockVector v = coherent_fock_vector(alpha, N);
    const double m = std::norm(alpha);
    double p = std::exp(-m);
    double mass = 0.0;
    for (int k = 0; k <= N; ++k) {
      CHECK(std::norm(v.amplitudes(k)) == doctest::Approx(p).epsilon(1e-12));
      mass += p;
      p *= m / (k + 1);
    }
    CHECK(v.squared_norm() == doctest::Approx(mass).epsilon(1e-12));
  }
}
