#pragma once

// Test ensembles, Alice's reduced state, the loss/excess-noise device model
// and the homodyne moments consumed by the truncation constraints.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "qbench/fock.hpp"

namespace qbench {

/// d >= 2 pure test states, used with uniform prior 1/d.
class TestEnsemble {
 public:
  explicit TestEnsemble(std::vector<TestStateSpec> states);

  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<TestStateSpec>& states() const { return states_; }
  const TestStateSpec& operator[](int k) const { return states_[static_cast<size_t>(k)]; }

 private:
  std::vector<TestStateSpec> states_;
};

/// {|alpha>, |-alpha>} with alpha > 0 chosen so that <alpha|-alpha> = overlap.
TestEnsemble two_coherent_ensemble(double overlap);
/// alpha * omega^k for k = 0,1,2 with omega = exp(2 pi i / 3).
TestEnsemble three_coherent_ring_ensemble(double amplitude);
/// x-squeezed and p-squeezed vacua of the same magnitude.
TestEnsemble squeezed_pair_ensemble(double r);

/// gram(m, n) = <psi_m|psi_n> / d.
struct ReducedStateA {
  Eigen::MatrixXcd gram;

  int dim() const { return static_cast<int>(gram.rows()); }
};

/// Homodyne statistics of one conditional state in shot-noise units
/// (vacuum variance 1/2).
struct MeasurementRecord {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.5;
  double var_p = 0.5;

  /// Throws InvariantViolation for non-positive variances or a violated
  /// uncertainty relation var_x * var_p >= 1/4 - tol.
  void validate(double tol = 1e-9) const;
};

struct DerivedMoments {
  double nbar = 0.0;
  cplx a_mean;
  double d_mean = 0.0;
};

/// Symmetric loss 1 - T and excess noise V_ex applied to every test state.
struct ChannelModel {
  double transmissivity = 1.0;
  double excess_noise = 0.0;

  void validate() const;
};

ReducedStateA build_rho_A(const TestEnsemble& ensemble);

/// Moments of the undisturbed test state.
MeasurementRecord input_moments(const TestStateSpec& state);

std::vector<MeasurementRecord> simulate_channel(const TestEnsemble& ensemble,
                                                const ChannelModel& channel);

/// Heterodyne detection followed by preparation of the coherent state
/// |gain * beta>: means scale by gain, Var_out = gain^2 (Var_in + 1/2) + 1/2.
/// Entanglement breaking for every gain.
std::vector<MeasurementRecord> intercept_resend(const TestEnsemble& ensemble, double gain = 1.0);

/// nbar below -tol throws NegativeEnergy; values in [-tol, 0) clamp to 0.
DerivedMoments derive_moments(const MeasurementRecord& record, double tol = 1e-9);

struct RecordSet {
  TestEnsemble ensemble;
  std::vector<MeasurementRecord> records;
};

// Line-oriented measurement-data file:
//
//   qbench-records v1
//   # comment
//   state coherent <re> <im> | record <mean_x> <mean_p> <var_x> <var_p>
//   state squeezed <r> <sign> | record <mean_x> <mean_p> <var_x> <var_p>
//
// A line may carry only the `state` part, in which case its record follows
// on a separate `record ...` line. The number of records must equal the
// number of states.
RecordSet parse_records(std::istream& in);
RecordSet ingest_records(const std::filesystem::path& path);
void write_records(std::ostream& out, const TestEnsemble& ensemble,
                   const std::vector<MeasurementRecord>& records);

}  // namespace qbench
