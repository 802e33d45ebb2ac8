#include "qbench/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace qbench {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool finite_in(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::TwoCoherent:
      return "TwoCoherent";
    case Scenario::ThreeCoherentRing:
      return "ThreeCoherentRing";
    case Scenario::SqueezedPair:
      return "SqueezedPair";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name, int line, int column) {
  const std::string n = lower(name);
  if (n == "twocoherent" || n == "two") return Scenario::TwoCoherent;
  if (n == "threecoherentring" || n == "ring") return Scenario::ThreeCoherentRing;
  if (n == "squeezedpair" || n == "squeezed") return Scenario::SqueezedPair;
  throw ParseError("unknown scenario '" + std::string(name) +
                       "' (valid: TwoCoherent, ThreeCoherentRing, SqueezedPair)",
                   line, column);
}

const char* to_string(Device d) { return d == Device::Channel ? "channel" : "intercept-resend"; }

Device parse_device(std::string_view name, int line, int column) {
  const std::string n = lower(name);
  if (n == "channel") return Device::Channel;
  if (n == "intercept-resend" || n == "interceptresend") return Device::InterceptResend;
  throw ParseError("unknown device '" + std::string(name) + "' (valid: channel, intercept-resend)", line,
                   column);
}

int default_cutoff(Scenario s) { return s == Scenario::ThreeCoherentRing ? 15 : 20; }

PointParams resolve(PointParams p) {
  if (p.N == 0) p.N = default_cutoff(p.scenario);
  if (p.N < 2) throw RangeError("N", "must be >= 2 (second-order bound), got " + std::to_string(p.N));
  if (!(p.T > 0.0 && p.T <= 1.0)) throw RangeError("T", "must lie in (0, 1]");
  if (!std::isfinite(p.Vex)) throw RangeError("Vex", "must be finite");
  switch (p.scenario) {
    case Scenario::TwoCoherent:
      if (p.overlap) {
        if (!(*p.overlap > 0.0 && *p.overlap < 1.0)) throw RangeError("overlap", "must lie in (0, 1)");
        p.alpha = std::sqrt(-std::log(*p.overlap) / 2.0);
      } else {
        p.alpha = p.alpha.value_or(std::sqrt(-std::log(0.6) / 2.0));
        if (!(*p.alpha > 0.0 && std::isfinite(*p.alpha))) throw RangeError("alpha", "must be > 0");
        p.overlap = std::exp(-2.0 * *p.alpha * *p.alpha);
      }
      break;
    case Scenario::ThreeCoherentRing:
      p.alpha = p.alpha.value_or(0.2);
      if (!(*p.alpha > 0.0 && std::isfinite(*p.alpha))) throw RangeError("alpha", "must be > 0");
      break;
    case Scenario::SqueezedPair:
      p.r = p.r.value_or(0.35);
      if (!finite_in(*p.r, 0.0, 5.0) || *p.r == 0.0) throw RangeError("r", "must lie in (0, 5]");
      break;
  }
  if (p.scenario != Scenario::SqueezedPair && (p.var_x || p.var_p)) {
    throw RangeError("var_x", "output variances are only settable for SqueezedPair; use Vex");
  }
  if (p.var_x && !(*p.var_x > 0.0)) throw RangeError("var_x", "must be > 0");
  if (p.var_p && !(*p.var_p > 0.0)) throw RangeError("var_p", "must be > 0");
  return p;
}

namespace {

TestEnsemble make_ensemble(const PointParams& p) {
  switch (p.scenario) {
    case Scenario::TwoCoherent:
      return two_coherent_ensemble(*p.overlap);
    case Scenario::ThreeCoherentRing:
      return three_coherent_ring_ensemble(*p.alpha);
    case Scenario::SqueezedPair:
      return squeezed_pair_ensemble(*p.r);
  }
  throw Error("unreachable scenario");
}

std::vector<MeasurementRecord> make_records(const PointParams& p, const TestEnsemble& ens) {
  std::vector<MeasurementRecord> records;
  if (p.device == Device::InterceptResend) {
    records = intercept_resend(ens, std::sqrt(p.T));
  } else {
    // Negative Vex is allowed through here; physicality is checked on the
    // resulting records.
    records = simulate_channel(ens, ChannelModel{p.T, 0.0});
    for (auto& r : records) {
      r.var_x += p.Vex;
      r.var_p += p.Vex;
    }
  }
  if (p.scenario == Scenario::SqueezedPair) {
    MeasurementRecord& first = records[0];
    MeasurementRecord& second = records[1];
    if (p.var_x) first.var_x = second.var_p = *p.var_x;
    if (p.var_p) first.var_p = second.var_x = *p.var_p;
  }
  return records;
}

bool physical(const std::vector<MeasurementRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const MeasurementRecord& r) {
    return r.var_x > 0.0 && r.var_p > 0.0 && r.var_x * r.var_p >= 0.25 - 1e-12;
  });
}

}  // namespace

BenchmarkProblem make_problem(const PointParams& resolved) {
  TestEnsemble ens = make_ensemble(resolved);
  auto records = make_records(resolved, ens);
  return BenchmarkProblem{resolved.N, std::move(ens), std::move(records)};
}

PointResult run_problem(const BenchmarkProblem& problem, HybridEnergy energy, const SolverBackend& backend) {
  PointResult out;
  out.params.N = problem.N;
  out.params.hybrid_energy = energy;
  out.lower = solve_lower_bound(problem, backend);
  out.upper = solve_hybrid_upper(problem, backend, energy);
  return out;
}

PointResult run_point(const PointParams& params, const SolverBackend& backend) {
  const PointParams p = resolve(params);
  const BenchmarkProblem problem = make_problem(p);
  PointResult out;
  if (!physical(problem.records)) {
    out.params = p;
    out.physical = false;
    return out;
  }
  out = run_problem(problem, p.hybrid_energy, backend);
  out.params = p;
  return out;
}

}  // namespace qbench
