#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>

#include "qbench/sweep.hpp"

namespace qbench {

namespace {

struct Entry {
  std::string value;
  int line;
  int column;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const Entry& e, const std::string& key) {
  std::string_view v = e.value;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError("'" + key + "' expects a number, got '" + e.value + "'", e.line, e.column);
  }
  return out;
}

int to_int(const Entry& e, const std::string& key) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), out);
  if (ec != std::errc() || ptr != e.value.data() + e.value.size()) {
    throw ParseError("'" + key + "' expects an integer, got '" + e.value + "'", e.line, e.column);
  }
  return out;
}

const char* const kKeys[] = {"scenario", "device", "T",     "Vex",   "N",     "r",       "alpha", "hybrid_energy",
                             "x_min",    "x_max",  "x_steps", "y_min", "y_max", "y_steps", "csv",   "svg",
                             "jobs"};

}  // namespace

SweepSpec parse_config(std::istream& in) {
  std::map<std::string, Entry> entries;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    if (trim(s).empty()) continue;
    const auto eq = s.find('=');
    const int key_col = static_cast<int>(s.find_first_not_of(" \t")) + 1;
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line, key_col);
    const std::string key(trim(s.substr(0, eq)));
    const std::string_view rest = s.substr(eq + 1);
    const std::string value(trim(rest));
    const int value_col =
        static_cast<int>(eq + 1 + (rest.find_first_not_of(" \t") == std::string_view::npos
                                       ? 0
                                       : rest.find_first_not_of(" \t"))) + 1;
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw ParseError("unknown key '" + key + "'", line, key_col);
    }
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line, value_col);
    if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", line, key_col);
    entries[key] = {value, line, value_col};
  }
  const auto sc = entries.find("scenario");
  if (sc == entries.end()) throw ParseError("missing required key 'scenario'", line + 1, 1);
  SweepSpec spec =
      default_sweep(parse_scenario(sc->second.value, sc->second.line, sc->second.column));

  auto get = [&entries](const char* key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  if (auto* e = get("device")) spec.base.device = parse_device(e->value, e->line, e->column);
  if (auto* e = get("T")) spec.base.T = to_double(*e, "T");
  if (auto* e = get("Vex")) spec.base.Vex = to_double(*e, "Vex");
  if (auto* e = get("N")) spec.base.N = to_int(*e, "N");
  if (auto* e = get("r")) spec.base.r = to_double(*e, "r");
  if (auto* e = get("alpha")) spec.base.alpha = to_double(*e, "alpha");
  if (auto* e = get("hybrid_energy")) {
    if (e->value == "none") {
      spec.base.hybrid_energy = HybridEnergy::None;
    } else if (e->value == "bounded") {
      spec.base.hybrid_energy = HybridEnergy::Bounded;
    } else {
      throw ParseError("hybrid_energy must be 'none' or 'bounded'", e->line, e->column);
    }
  }
  if (auto* e = get("x_min")) spec.x.min = to_double(*e, "x_min");
  if (auto* e = get("x_max")) spec.x.max = to_double(*e, "x_max");
  if (auto* e = get("x_steps")) spec.x.steps = to_int(*e, "x_steps");
  if (auto* e = get("y_min")) spec.y.min = to_double(*e, "y_min");
  if (auto* e = get("y_max")) spec.y.max = to_double(*e, "y_max");
  if (auto* e = get("y_steps")) spec.y.steps = to_int(*e, "y_steps");
  if (auto* e = get("csv")) spec.csv = e->value;
  if (auto* e = get("svg")) spec.svg = e->value;
  if (auto* e = get("jobs")) spec.jobs = to_int(*e, "jobs");
  if (spec.base.N == 0) spec.base.N = default_cutoff(spec.base.scenario);
  spec.validate();
  return spec;
}

SweepSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace qbench
