#include "qbench/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "qbench/errors.hpp"

namespace qbench {

TestEnsemble::TestEnsemble(std::vector<TestStateSpec> states) : states_(std::move(states)) {
  if (states_.size() < 2) {
    throw InvariantViolation("d >= 2", "ensemble has " + std::to_string(states_.size()) +
                                           " state(s)");
  }
}

TestEnsemble two_coherent_ensemble(double overlap) {
  if (!(overlap > 0.0 && overlap <= 1.0)) {
    throw RangeError("overlap", "must lie in (0, 1], got " + std::to_string(overlap));
  }
  const double alpha = std::sqrt(-0.5 * std::log(overlap));
  return TestEnsemble({CoherentState{alpha}, CoherentState{-alpha}});
}

TestEnsemble three_coherent_ring_ensemble(double amplitude) {
  if (amplitude < 0.0) throw RangeError("alpha", "ring amplitude must be >= 0");
  std::vector<TestStateSpec> states;
  for (int k = 0; k < 3; ++k) {
    states.emplace_back(CoherentState{std::polar(amplitude, 2.0 * std::numbers::pi * k / 3.0)});
  }
  return TestEnsemble(std::move(states));
}

TestEnsemble squeezed_pair_ensemble(double r) {
  if (r < 0.0) throw RangeError("r", "squeezing magnitude must be >= 0");
  return TestEnsemble({SqueezedVacuum{r, 1}, SqueezedVacuum{r, -1}});
}

void MeasurementRecord::validate(double tol) const {
  if (!std::isfinite(mean_x) || !std::isfinite(mean_p) || !std::isfinite(var_x) ||
      !std::isfinite(var_p)) {
    throw InvariantViolation("finite moments", "record contains a non-finite value");
  }
  if (!(var_x > 0.0)) {
    throw InvariantViolation("var_x > 0", "var_x = " + std::to_string(var_x));
  }
  if (!(var_p > 0.0)) {
    throw InvariantViolation("var_p > 0", "var_p = " + std::to_string(var_p));
  }
  if (var_x * var_p < 0.25 - tol) {
    throw InvariantViolation("var_x * var_p >= 1/4",
                             "uncertainty relation violated: var_x * var_p = " +
                                 std::to_string(var_x * var_p));
  }
}

void ChannelModel::validate() const {
  if (!(transmissivity > 0.0 && transmissivity <= 1.0)) {
    throw RangeError("T", "transmissivity must lie in (0, 1]");
  }
  if (!(excess_noise >= 0.0)) throw RangeError("Vex", "excess noise must be >= 0");
}

ReducedStateA build_rho_A(const TestEnsemble& ensemble) {
  const int d = ensemble.size();
  ReducedStateA rho{Eigen::MatrixXcd::Zero(d, d)};
  for (int m = 0; m < d; ++m) {
    rho.gram(m, m) = 1.0 / d;
    for (int n = m + 1; n < d; ++n) {
      const cplx value = overlap(ensemble[m], ensemble[n]) / static_cast<double>(d);
      rho.gram(m, n) = value;
      rho.gram(n, m) = std::conj(value);
    }
  }
  return rho;
}

MeasurementRecord input_moments(const TestStateSpec& state) {
  return std::visit(
      [](const auto& s) -> MeasurementRecord {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CoherentState>) {
          return {std::sqrt(2.0) * s.alpha.real(), std::sqrt(2.0) * s.alpha.imag(), 0.5, 0.5};
        } else {
          const double squeezed = 0.5 * std::exp(-2.0 * s.r);
          const double anti = 0.5 * std::exp(2.0 * s.r);
          return s.sign == 1 ? MeasurementRecord{0.0, 0.0, squeezed, anti}
                             : MeasurementRecord{0.0, 0.0, anti, squeezed};
        }
      },
      state);
}

std::vector<MeasurementRecord> simulate_channel(const TestEnsemble& ensemble,
                                                const ChannelModel& channel) {
  channel.validate();
  const double scale = std::sqrt(channel.transmissivity);
  std::vector<MeasurementRecord> out;
  out.reserve(ensemble.states().size());
  for (const auto& state : ensemble.states()) {
    MeasurementRecord r = input_moments(state);
    r.mean_x *= scale;
    r.mean_p *= scale;
    // Loss mixes in vacuum (variance 1/2), then excess noise is added.
    const double t = channel.transmissivity;
    r.var_x = t * r.var_x + 0.5 * (1.0 - t) + channel.excess_noise;
    r.var_p = t * r.var_p + 0.5 * (1.0 - t) + channel.excess_noise;
    out.push_back(r);
  }
  return out;
}

std::vector<MeasurementRecord> intercept_resend(const TestEnsemble& ensemble, double gain) {
  if (!(gain >= 0.0)) throw RangeError("gain", "must be >= 0");
  std::vector<MeasurementRecord> out;
  out.reserve(ensemble.states().size());
  for (const auto& state : ensemble.states()) {
    MeasurementRecord r = input_moments(state);
    r.mean_x *= gain;
    r.mean_p *= gain;
    r.var_x = gain * gain * (r.var_x + 0.5) + 0.5;
    r.var_p = gain * gain * (r.var_p + 0.5) + 0.5;
    out.push_back(r);
  }
  return out;
}

DerivedMoments derive_moments(const MeasurementRecord& record, double tol) {
  record.validate(tol);
  const double x2 = record.var_x + record.mean_x * record.mean_x;
  const double p2 = record.var_p + record.mean_p * record.mean_p;
  double nbar = 0.5 * (x2 + p2 - 1.0);
  if (nbar < -tol) {
    throw NegativeEnergy("mean photon number " + std::to_string(nbar) + " is negative");
  }
  if (nbar < 0.0) nbar = 0.0;
  return {nbar, cplx(record.mean_x, record.mean_p) / std::sqrt(2.0), x2 - p2};
}

}  // namespace qbench
