#include "qbench/fock.hpp"

#include <cmath>
#include <type_traits>

#include "qbench/errors.hpp"

namespace qbench {

namespace {

void require_cutoff(int cutoff) {
  if (cutoff < 0) throw RangeError("cutoff", "must be >= 0, got " + std::to_string(cutoff));
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

TruncatedOperator annihilation_matrix(int cutoff) {
  require_cutoff(cutoff);
  const int dim = cutoff + 1;
  TruncatedOperator a{Eigen::MatrixXcd::Zero(dim, dim), false};
  for (int k = 0; k < cutoff; ++k) a.entries(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
  return a;
}

QuadratureSet quadrature_matrices(int cutoff) {
  const Eigen::MatrixXcd a = annihilation_matrix(cutoff).entries;
  const Eigen::MatrixXcd adag = a.adjoint();
  const int dim = cutoff + 1;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const cplx i{0.0, 1.0};

  QuadratureSet q;
  q.x = {(adag + a) * inv_sqrt2, true};
  q.p = {(adag - a) * (i * inv_sqrt2), true};

  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  q.n = {n, true};

  // Squaring the truncated a would lose nothing here, but the elements are
  // written directly so d stays exactly symmetric with a zero diagonal.
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k + 2 < dim; ++k) {
    const double v = std::sqrt(static_cast<double>((k + 1) * (k + 2)));
    d(k, k + 2) = v;
    d(k + 2, k) = v;
  }
  q.d = {d, true};
  return q;
}

FockVector coherent_fock_vector(cplx alpha, int cutoff) {
  require_cutoff(cutoff);
  FockVector v{Eigen::VectorXcd::Zero(cutoff + 1)};
  const double mag = std::abs(alpha);
  if (mag == 0.0) {
    v.amplitudes(0) = 1.0;
    return v;
  }
  const double phase = std::arg(alpha);
  const double log_mag = std::log(mag);
  for (int n = 0; n <= cutoff; ++n) {
    const double log_amp = -0.5 * mag * mag + n * log_mag - 0.5 * log_factorial(n);
    v.amplitudes(n) = std::polar(std::exp(log_amp), n * phase);
  }
  return v;
}

FockVector squeezed_vacuum_fock_vector(double r, int sign, int cutoff) {
  require_cutoff(cutoff);
  if (r < 0.0) throw RangeError("r", "squeezing magnitude must be >= 0");
  if (sign != 1 && sign != -1) throw RangeError("sign", "must be +1 or -1");
  FockVector v{Eigen::VectorXcd::Zero(cutoff + 1)};
  if (r == 0.0) {
    v.amplitudes(0) = 1.0;
    return v;
  }
  const double t = std::tanh(r);
  const double log_t = std::log(t);
  const double log_norm = -0.5 * std::log(std::cosh(r));
  for (int m = 0; 2 * m <= cutoff; ++m) {
    const double log_amp = log_norm + m * log_t + 0.5 * log_factorial(2 * m) -
                           m * std::log(2.0) - log_factorial(m);
    const double s = (m % 2 == 0 || sign == -1) ? 1.0 : -1.0;
    v.amplitudes(2 * m) = s * std::exp(log_amp);
  }
  return v;
}

FockVector fock_vector(const TestStateSpec& state, int cutoff) {
  return std::visit(
      [cutoff](const auto& s) -> FockVector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CoherentState>) {
          return coherent_fock_vector(s.alpha, cutoff);
        } else {
          return squeezed_vacuum_fock_vector(s.r, s.sign, cutoff);
        }
      },
      state);
}

namespace {

cplx numeric_overlap(const TestStateSpec& a, const TestStateSpec& b) {
  constexpr double kTail = 1e-12;
  for (int cutoff = 32; cutoff <= kMaxOverlapCutoff; cutoff *= 2) {
    const FockVector va = fock_vector(a, cutoff);
    const FockVector vb = fock_vector(b, cutoff);
    const double tail_a = 1.0 - va.squared_norm();
    const double tail_b = 1.0 - vb.squared_norm();
    // |sum_{n>N} a_n^* b_n| <= sqrt(tail_a * tail_b) by Cauchy-Schwarz.
    if (tail_a <= kTail && tail_b <= kTail) return va.amplitudes.dot(vb.amplitudes);
  }
  throw CutoffInsufficient("overlap: tail above 1e-12 even at cutoff " +
                           std::to_string(kMaxOverlapCutoff));
}

}  // namespace

cplx overlap(const TestStateSpec& a, const TestStateSpec& b) {
  if (const auto* ca = std::get_if<CoherentState>(&a)) {
    if (const auto* cb = std::get_if<CoherentState>(&b)) {
      const cplx x = ca->alpha;
      const cplx y = cb->alpha;
      return std::exp(-0.5 * std::norm(x) - 0.5 * std::norm(y) + std::conj(x) * y);
    }
  }
  if (const auto* sa = std::get_if<SqueezedVacuum>(&a)) {
    if (const auto* sb = std::get_if<SqueezedVacuum>(&b)) {
      const double rel = (sa->sign == sb->sign) ? sa->r - sb->r : sa->r + sb->r;
      return 1.0 / std::sqrt(std::cosh(rel));
    }
  }
  return numeric_overlap(a, b);
}

}  // namespace qbench
