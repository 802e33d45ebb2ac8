// qbench: negativity bounds from homodyne data of nonorthogonal test states.
//
//   qbench point  --scenario two --overlap 0.6 --Vex 0.1
//   qbench sweep  --config fig4.cfg --jobs 4
//   qbench ingest data.txt --N 20

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qbench/sdpa_io.hpp"
#include "qbench/svg_plot.hpp"
#include "qbench/sweep.hpp"

using namespace qbench;

namespace {

constexpr int kExitSolver = 2;

struct Common {
  std::string scenario = "two";
  std::string device = "channel";
  std::string hybrid = "bounded";
  double T = 1.0;
  double Vex = 0.0;
  int N = 0;
  std::optional<double> alpha, r, overlap, var_x, var_p;
  bool lenient = false;
};

void add_physics(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario, "TwoCoherent (two), ThreeCoherentRing (ring) or SqueezedPair (squeezed)");
  cmd->add_option("--device", c.device, "channel or intercept-resend");
  cmd->add_option("--T", c.T, "transmissivity in (0, 1]");
  cmd->add_option("--Vex", c.Vex, "excess noise, shot-noise units (vacuum variance 1/2)");
  cmd->add_option("--N", c.N, "Fock cutoff (default 20, ring 15)");
  cmd->add_option("--alpha", c.alpha, "coherent amplitude |alpha|");
  cmd->add_option("--overlap", c.overlap, "<alpha|-alpha> for TwoCoherent");
  cmd->add_option("--r", c.r, "squeezing magnitude for SqueezedPair (default 0.35)");
  cmd->add_option("--var-x", c.var_x, "SqueezedPair: output Var(x) of the x-squeezed state");
  cmd->add_option("--var-p", c.var_p, "SqueezedPair: output Var(p) of the x-squeezed state");
  cmd->add_option("--hybrid-energy", c.hybrid, "energy constraint in the hybrid program: bounded or none");
  cmd->add_flag("--lenient", c.lenient, "exit 0 even if a program did not reach Optimal");
}

HybridEnergy parse_energy(const std::string& s) {
  if (s == "bounded") return HybridEnergy::Bounded;
  if (s == "none") return HybridEnergy::None;
  throw RangeError("hybrid-energy", "must be 'bounded' or 'none'");
}

PointParams params_of(const Common& c) {
  PointParams p;
  p.scenario = parse_scenario(c.scenario);
  p.device = parse_device(c.device);
  p.T = c.T;
  p.Vex = c.Vex;
  p.N = c.N;
  p.alpha = c.alpha;
  p.r = c.r;
  p.overlap = c.overlap;
  p.var_x = c.var_x;
  p.var_p = c.var_p;
  p.hybrid_energy = parse_energy(c.hybrid);
  return p;
}

void print_bound(const char* name, const BoundResult& b) {
  std::printf("%-6s %-16s value %.8f  gap % .2e  iterations %d%s\n", name, to_string(b.status), b.value,
              b.duality_gap, b.iterations, b.reduced_accuracy ? "  (reduced accuracy)" : "");
}

void print_result(const PointResult& r) {
  const PointParams& p = r.params;
  std::printf("scenario %s  device %s  N %d  T %g  Vex %g", to_string(p.scenario), to_string(p.device), p.N, p.T,
              p.Vex);
  if (p.overlap) std::printf("  overlap %g", *p.overlap);
  if (p.alpha) std::printf("  alpha %g", *p.alpha);
  if (p.r) std::printf("  r %g", *p.r);
  if (p.var_x) std::printf("  var_x %g", *p.var_x);
  if (p.var_p) std::printf("  var_p %g", *p.var_p);
  std::printf("\n");
  if (!r.physical) {
    std::printf("unphysical: output variances violate the uncertainty relation\n");
    return;
  }
  print_bound("lower", r.lower);
  print_bound("upper", r.upper);
  std::printf("quantum_flag %d  (zero threshold %g)\n", r.quantum_flag() ? 1 : 0, kZeroThreshold);
}

void write_one_csv(const std::string& path, const PointResult& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_csv_header(out);
  write_csv_row(out, SweepRow{0, 0, r});
}

void dump_problem(const std::string& path, const BenchmarkProblem& problem) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  if (problem.is_real()) {
    write_sdpa(out, lower_model(build_lower_bound_model<double>(problem).model));
  } else {
    write_sdpa(out, lower_model(build_lower_bound_model<cplx>(problem).model));
  }
}

// Only used to label the CSV row of an ingested record file.
Scenario ingested_scenario(const TestEnsemble& ensemble) {
  for (const auto& s : ensemble.states()) {
    if (std::holds_alternative<SqueezedVacuum>(s)) return Scenario::SqueezedPair;
  }
  return ensemble.size() == 3 ? Scenario::ThreeCoherentRing : Scenario::TwoCoherent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified negativity bounds for optical devices from homodyne data"};
  app.require_subcommand(1);

  Common point_opts;
  std::string point_out, point_dump;
  auto* point = app.add_subcommand("point", "evaluate one parameter point");
  add_physics(point, point_opts);
  point->add_option("--out", point_out, "also write the result as a one-row CSV");
  point->add_option("--dump", point_dump, "write the lower-bound program in SDPA sparse format");

  Common sweep_opts;
  std::string config, sweep_out, sweep_svg;
  int jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "evaluate a grid and write CSV and SVG");
  sweep->add_option("--config", config, "sweep description (key = value lines)");
  add_physics(sweep, sweep_opts);
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_option("--out", sweep_out, "CSV path (overrides the config)");
  sweep->add_option("--svg", sweep_svg, "SVG path (overrides the config)");

  std::string records_path, ingest_out, ingest_hybrid = "bounded";
  int ingest_n = 20;
  bool ingest_lenient = false;
  auto* ingest = app.add_subcommand("ingest", "bound the negativity for measured records");
  ingest->add_option("records", records_path, "qbench-records v1 file")->required();
  ingest->add_option("--N", ingest_n, "Fock cutoff");
  ingest->add_option("--out", ingest_out, "also write the result as a one-row CSV");
  ingest->add_option("--hybrid-energy", ingest_hybrid, "bounded or none");
  ingest->add_flag("--lenient", ingest_lenient, "exit 0 even if a program did not reach Optimal");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*point) {
      const PointParams p = resolve(params_of(point_opts));
      if (!point_dump.empty()) dump_problem(point_dump, make_problem(p));
      const PointResult r = run_point(p);
      print_result(r);
      if (!point_out.empty()) write_one_csv(point_out, r);
      const bool trouble = r.physical && (r.lower.status == BoundStatus::NumericalTrouble ||
                                          r.upper.status == BoundStatus::NumericalTrouble);
      return trouble && !point_opts.lenient ? kExitSolver : 0;
    }

    if (*sweep) {
      SweepSpec spec;
      if (!config.empty()) {
        spec = parse_config(std::filesystem::path(config));
      } else {
        spec = default_sweep(parse_scenario(sweep_opts.scenario));
      }
      // Flags given on the command line override the config.
      auto given = [sweep](const char* name) { return sweep->count(name) > 0; };
      if (config.empty() || given("--device")) spec.base.device = parse_device(sweep_opts.device);
      if (config.empty() || given("--hybrid-energy")) spec.base.hybrid_energy = parse_energy(sweep_opts.hybrid);
      if (given("--T")) spec.base.T = sweep_opts.T;
      if (given("--Vex")) spec.base.Vex = sweep_opts.Vex;
      if (given("--N")) spec.base.N = sweep_opts.N;
      if (given("--r")) spec.base.r = sweep_opts.r;
      if (given("--alpha")) spec.base.alpha = sweep_opts.alpha;
      if (jobs > 0) spec.jobs = jobs;
      if (!sweep_out.empty()) spec.csv = sweep_out;
      if (!sweep_svg.empty()) spec.svg = sweep_svg;
      spec.validate();

      std::ofstream csv(spec.csv, std::ios::binary);
      if (!csv) throw Error("cannot write '" + spec.csv.string() + "'");
      write_csv_header(csv);
      bool all_ok = true;
      const auto rows = run_sweep(spec, *default_backend(), [&](const SweepRow& row) {
        write_csv_row(csv, row);
        csv.flush();
        if (!row.result.ok()) all_ok = false;
        std::fprintf(stderr, "[%d,%d] lower %s %s  upper %s %s\n", row.row, row.col,
                     status_text(row.result, true).c_str(),
                     row.result.physical ? std::to_string(row.result.lower.value).c_str() : "-",
                     status_text(row.result, false).c_str(),
                     row.result.physical ? std::to_string(row.result.upper.value).c_str() : "-");
      });
      if (!spec.svg.empty()) {
        std::ofstream svg(spec.svg);
        if (!svg) throw Error("cannot write '" + spec.svg.string() + "'");
        write_svg(svg, spec, rows);
      }
      std::printf("wrote %zu rows to %s\n", rows.size(), spec.csv.string().c_str());
      return all_ok || sweep_opts.lenient ? 0 : kExitSolver;
    }

    if (*ingest) {
      const RecordSet set = ingest_records(records_path);
      const BenchmarkProblem problem{ingest_n, set.ensemble, set.records};
      PointResult r = run_problem(problem, parse_energy(ingest_hybrid));
      r.params.scenario = ingested_scenario(set.ensemble);
      std::printf("records %s  d %d  N %d\n", records_path.c_str(), set.ensemble.size(), ingest_n);
      print_bound("lower", r.lower);
      print_bound("upper", r.upper);
      std::printf("quantum_flag %d  (zero threshold %g)\n", r.quantum_flag() ? 1 : 0, kZeroThreshold);
      if (!ingest_out.empty()) write_one_csv(ingest_out, r);
      const bool trouble =
          r.lower.status == BoundStatus::NumericalTrouble || r.upper.status == BoundStatus::NumericalTrouble;
      return trouble && !ingest_lenient ? kExitSolver : 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "qbench: %s\n", e.what());
    return 1;
  }
  return 0;
}
