#include "qbench/sweep.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

namespace qbench {

const char* x_axis_name(Scenario s) {
  switch (s) {
    case Scenario::TwoCoherent:
      return "overlap";
    case Scenario::ThreeCoherentRing:
      return "alpha";
    case Scenario::SqueezedPair:
      return "var_x";
  }
  return "?";
}

const char* y_axis_name(Scenario s) { return s == Scenario::SqueezedPair ? "var_p" : "variance"; }

SweepSpec default_sweep(Scenario s) {
  SweepSpec spec;
  spec.base.scenario = s;
  switch (s) {
    case Scenario::TwoCoherent:
      spec.x = {0.05, 0.95, 10};
      spec.y = {0.5, 1.5, 11};
      break;
    case Scenario::ThreeCoherentRing:
      spec.x = {0.1, 1.0, 10};
      spec.y = {0.5, 1.5, 11};
      break;
    case Scenario::SqueezedPair:
      spec.base.r = 0.35;
      spec.x = {0.2, 1.0, 9};
      spec.y = {0.5, 1.5, 11};
      break;
  }
  spec.csv = "sweep.csv";
  spec.svg = "sweep.svg";
  return spec;
}

void SweepSpec::validate() const {
  auto check_axis = [](const Axis& a, const std::string& name) {
    if (a.steps < 1) throw RangeError(name + "_steps", "must be >= 1");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw RangeError(name + "_min", "must be finite");
    if (a.steps > 1 && !(a.max > a.min)) throw RangeError(name + "_max", "must exceed " + name + "_min");
  };
  check_axis(x, "x");
  check_axis(y, "y");
  if (jobs < 1) throw RangeError("jobs", "must be >= 1");
  resolve(grid_point(*this, 0, 0));
  resolve(grid_point(*this, y.steps - 1, x.steps - 1));
}

PointParams grid_point(const SweepSpec& spec, int row, int col) {
  PointParams p = spec.base;
  const double xv = spec.x.at(col);
  const double yv = spec.y.at(row);
  switch (p.scenario) {
    case Scenario::TwoCoherent:
      p.overlap = xv;
      p.alpha.reset();
      p.Vex = yv - 0.5;
      break;
    case Scenario::ThreeCoherentRing:
      p.alpha = xv;
      p.Vex = yv - 0.5;
      break;
    case Scenario::SqueezedPair:
      p.var_x = xv;
      p.var_p = yv;
      break;
  }
  return p;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SolverBackend& backend,
                                const std::function<void(const SweepRow&)>& progress) {
  spec.validate();
  const int total = spec.x.steps * spec.y.steps;
  std::vector<SweepRow> rows(static_cast<size_t>(total));
  std::vector<char> done(static_cast<size_t>(total), 0);
  std::atomic<int> next{0};
  std::mutex mu;
  std::condition_variable cv;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= total) return;
      SweepRow r{k / spec.x.steps, k % spec.x.steps, {}};
      try {
        r.result = run_point(grid_point(spec, r.row, r.col), backend);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(total);
      }
      {
        std::lock_guard lock(mu);
        rows[static_cast<size_t>(k)] = std::move(r);
        done[static_cast<size_t>(k)] = 1;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  const int workers = std::min(spec.jobs, total);
  if (workers > 1) {
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  } else {
    worker();
  }

  // Hand rows to `progress` in grid order as soon as their prefix is ready.
  int emitted = 0;
  if (workers > 1) {
    std::unique_lock lock(mu);
    while (emitted < total) {
      cv.wait(lock, [&] { return failure || done[static_cast<size_t>(emitted)]; });
      if (failure) break;
      while (emitted < total && done[static_cast<size_t>(emitted)]) {
        if (progress) {
          lock.unlock();
          progress(rows[static_cast<size_t>(emitted)]);
          lock.lock();
        }
        ++emitted;
      }
    }
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  if (progress) {
    for (int k = emitted; k < total; ++k) progress(rows[static_cast<size_t>(k)]);
  }
  return rows;
}

std::string status_text(const PointResult& r, bool lower) {
  if (!r.physical) return "Unphysical";
  return to_string(lower ? r.lower.status : r.upper.status);
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

// RFC 4180: quote fields containing separators, quotes or line breaks.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv_header(std::ostream& out) {
  out << "schema,scenario,row,col,N,T,Vex,overlap,alpha,r,var_x,var_p,lower,lower_status,upper,upper_status,"
         "gap_lower,gap_upper,quantum_flag,zero_threshold\r\n";
}

void write_csv_row(std::ostream& out, const SweepRow& row) {
  const PointResult& r = row.result;
  const PointParams& p = r.params;
  const bool solved = r.physical;
  const std::string fields[] = {
      kCsvSchema,
      to_string(p.scenario),
      std::to_string(row.row),
      std::to_string(row.col),
      std::to_string(p.N),
      num(p.T),
      p.var_x || p.var_p ? std::string() : num(p.Vex),
      opt(p.overlap),
      opt(p.alpha),
      opt(p.r),
      opt(p.var_x),
      opt(p.var_p),
      solved ? num(r.lower.value) : "",
      status_text(r, true),
      solved ? num(r.upper.value) : "",
      status_text(r, false),
      solved ? num(r.lower.duality_gap) : "",
      solved ? num(r.upper.duality_gap) : "",
      r.quantum_flag() ? "1" : "0",
      num(kZeroThreshold),
  };
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << ',';
    out << field(f);
    first = false;
  }
  out << "\r\n";
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  write_csv_header(out);
  for (const auto& r : rows) write_csv_row(out, r);
}

}  // namespace qbench
