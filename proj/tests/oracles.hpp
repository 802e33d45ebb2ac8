#pragma once

// Reference computations for the tests. Nothing here calls into the library
// under test; states are built by exponentiating operators at a generous
// cutoff and entanglement is read off eigenvalues directly.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline constexpr int kReferenceCutoff = 60;

inline MatrixXcd lowering(int cutoff) {
  MatrixXcd a = MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int k = 1; k <= cutoff; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

inline VectorXcd vacuum(int cutoff) {
  VectorXcd v = VectorXcd::Zero(cutoff + 1);
  v(0) = 1.0;
  return v;
}

// D(alpha)|0>, computed on a larger space and cut back so that the edge
// artefacts of the truncated exponential do not leak in.
inline VectorXcd displaced_vacuum(cplx alpha, int cutoff = kReferenceCutoff) {
  const int big = cutoff + 40;
  const MatrixXcd a = lowering(big);
  const MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
  const VectorXcd v = gen.exp() * vacuum(big);
  return v.head(cutoff + 1);
}

// S(xi)|0> with S(xi) = exp((xi* a^2 - xi a^dag^2) / 2); real xi > 0
// squeezes x. The phase is fixed so that the vacuum amplitude is positive.
inline VectorXcd squeezed_vacuum(double xi, int cutoff = kReferenceCutoff) {
  const int big = cutoff + 60;
  const MatrixXcd a = lowering(big);
  const MatrixXcd gen = 0.5 * (xi * a * a - xi * a.adjoint() * a.adjoint());
  VectorXcd v = (gen.exp() * vacuum(big)).head(cutoff + 1);
  v *= std::polar(1.0, -std::arg(v(0)));
  return v;
}

inline MatrixXcd thermal(double nbar, int cutoff = kReferenceCutoff) {
  MatrixXcd rho = MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  const double q = nbar / (1.0 + nbar);
  for (int k = 0; k <= cutoff; ++k) rho(k, k) = std::pow(q, k) / (1.0 + nbar);
  return rho;
}

inline cplx coherent_overlap(cplx a, cplx b) {
  return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

struct Moments {
  double nbar;
  cplx a;
  double d;  // <a^2 + a^dag^2>
  double trace;
};

inline Moments moments(const MatrixXcd& rho) {
  const int n = static_cast<int>(rho.rows()) - 1;
  const MatrixXcd a = lowering(n);
  const MatrixXcd num = a.adjoint() * a;
  const MatrixXcd dd = a * a + a.adjoint() * a.adjoint();
  return {(rho * num).trace().real(), (rho * a).trace(), (rho * dd).trace().real(), rho.trace().real()};
}

// Partial transpose on the first factor of a (dA * dB) square matrix laid
// out with the first factor's index outermost.
inline MatrixXcd partial_transpose_first(const MatrixXcd& m, int dA, int dB) {
  MatrixXcd out(m.rows(), m.cols());
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      for (int k = 0; k < dB; ++k)
        for (int l = 0; l < dB; ++l) out(i * dB + k, j * dB + l) = m(j * dB + k, i * dB + l);
  return out;
}

inline double eigen_negativity(const MatrixXcd& rho, int dA, int dB) {
  const MatrixXcd pt = partial_transpose_first(rho, dA, dB);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int k = 0; k < eig.eigenvalues().size(); ++k) neg += std::max(0.0, -eig.eigenvalues()(k));
  return neg;
}

// Negativity of the pure source state sum_i |i>|psi_i> / sqrt(d): its
// Schmidt coefficients are the eigenvalues of G / d, and for a pure state
// N = ((sum sqrt(lambda))^2 - 1) / 2.
inline double span_negativity(const MatrixXcd& gram) {
  const double d = static_cast<double>(gram.rows());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(gram / d, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int k = 0; k < eig.eigenvalues().size(); ++k) s += std::sqrt(std::max(0.0, eig.eigenvalues()(k)));
  return 0.5 * (s * s - 1.0);
}

inline MatrixXcd coherent_gram(const std::vector<cplx>& alphas) {
  const int d = static_cast<int>(alphas.size());
  MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = coherent_overlap(alphas[i], alphas[j]);
  return g;
}

// Amplitude alpha > 0 with <alpha|-alpha> = overlap.
inline double amplitude_for_overlap(double overlap) { return std::sqrt(-0.5 * std::log(overlap)); }

inline MatrixXcd random_density(int n, std::mt19937_64& rng, int rank = -1) {
  std::normal_distribution<double> g;
  const int r = rank < 0 ? n : rank;
  MatrixXcd m(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) m(i, j) = cplx(g(rng), g(rng));
  MatrixXcd rho = m * m.adjoint();
  return rho / rho.trace().real();
}

// Product of two random local states: separable by construction.
inline MatrixXcd random_product(int dA, int dB, std::mt19937_64& rng) {
  const MatrixXcd a = random_density(dA, rng);
  const MatrixXcd b = random_density(dB, rng);
  MatrixXcd out(dA * dB, dA * dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) out.block(i * dB, j * dB, dB, dB) = a(i, j) * b;
  return out;
}

}  // namespace oracle
