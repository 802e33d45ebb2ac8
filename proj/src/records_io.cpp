#include <charconv>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "qbench/ensemble.hpp"
#include "qbench/errors.hpp"

namespace qbench {

namespace {

constexpr std::string_view kHeader = "qbench-records v1";

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    if (line[i] == '|') {
      tokens.push_back({line.substr(i, 1), static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    const size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '|') {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

class LineCursor {
 public:
  LineCursor(std::vector<Token> tokens, int line, int end_column)
      : tokens_(std::move(tokens)), line_(line), end_column_(end_column) {}

  bool done() const { return pos_ >= tokens_.size(); }

  const Token& next(const char* what) {
    if (done()) throw ParseError(std::string("expected ") + what, line_, end_column_);
    return tokens_[pos_++];
  }

  double number(const char* what) {
    const Token& t = next(what);
    double value = 0.0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw ParseError(std::string("expected ") + what + ", got '" + std::string(t.text) + "'",
                       line_, t.column);
    }
    return value;
  }

  void keyword(std::string_view expected) {
    const Token& t = next(std::string(expected).c_str());
    if (t.text != expected) {
      throw ParseError("expected '" + std::string(expected) + "', got '" + std::string(t.text) +
                           "'",
                       line_, t.column);
    }
  }

  void finish() {
    if (!done()) {
      const Token& t = tokens_[pos_];
      throw ParseError("unexpected trailing token '" + std::string(t.text) + "'", line_,
                       t.column);
    }
  }

  int line() const { return line_; }
  int column() const { return done() ? end_column_ : tokens_[pos_].column; }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  int line_;
  int end_column_;
};

TestStateSpec parse_state(LineCursor& cur) {
  const int col = cur.column();
  const Token family = cur.next("state family");
  if (family.text == "coherent") {
    const double re = cur.number("real part of alpha");
    const double im = cur.number("imaginary part of alpha");
    return CoherentState{cplx(re, im)};
  }
  if (family.text == "squeezed") {
    const double r = cur.number("squeezing magnitude r");
    const int sign_col = cur.column();
    const double sign = cur.number("squeezing sign");
    if (r < 0.0) throw ParseError("squeezing magnitude must be >= 0", cur.line(), col);
    if (sign != 1.0 && sign != -1.0) {
      throw ParseError("squeezing sign must be +1 or -1", cur.line(), sign_col);
    }
    return SqueezedVacuum{r, sign > 0 ? 1 : -1};
  }
  throw ParseError("unknown state family '" + std::string(family.text) +
                       "' (valid: coherent, squeezed)",
                   cur.line(), family.column);
}

MeasurementRecord parse_record(LineCursor& cur) {
  MeasurementRecord r;
  r.mean_x = cur.number("mean_x");
  r.mean_p = cur.number("mean_p");
  r.var_x = cur.number("var_x");
  r.var_p = cur.number("var_p");
  return r;
}

}  // namespace

RecordSet parse_records(std::istream& in) {
  std::vector<TestStateSpec> states;
  std::vector<MeasurementRecord> records;
  std::vector<int> record_lines;
  bool header_seen = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (!header_seen) {
      std::string joined;
      for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + std::string(t.text);
      if (joined != kHeader) {
        throw ParseError("expected header '" + std::string(kHeader) + "'", line_no,
                         tokens.front().column);
      }
      header_seen = true;
      continue;
    }
    LineCursor cur(std::move(tokens), line_no, static_cast<int>(line.size()) + 1);
    const Token head = cur.next("'state' or 'record'");
    if (head.text == "state") {
      states.push_back(parse_state(cur));
      if (!cur.done()) {
        cur.keyword("|");
        cur.keyword("record");
        records.push_back(parse_record(cur));
        record_lines.push_back(line_no);
      }
    } else if (head.text == "record") {
      records.push_back(parse_record(cur));
      record_lines.push_back(line_no);
    } else {
      throw ParseError("expected 'state' or 'record', got '" + std::string(head.text) + "'",
                       line_no, head.column);
    }
    cur.finish();
  }
  if (!header_seen) throw ParseError("missing header '" + std::string(kHeader) + "'", 1, 1);
  if (states.size() != records.size()) {
    throw ParseError("found " + std::to_string(states.size()) + " state(s) but " +
                         std::to_string(records.size()) + " record(s)",
                     line_no, 1);
  }
  if (states.size() < 2) {
    throw ParseError("at least two test states are required", line_no, 1);
  }
  for (size_t k = 0; k < records.size(); ++k) {
    try {
      records[k].validate();
    } catch (const InvariantViolation& e) {
      throw InvariantViolation(e.invariant(), "record on line " +
                                                  std::to_string(record_lines[k]) + ": " +
                                                  e.what());
    }
  }
  return {TestEnsemble(std::move(states)), std::move(records)};
}

RecordSet ingest_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open records file '" + path.string() + "'");
  return parse_records(in);
}

void write_records(std::ostream& out, const TestEnsemble& ensemble,
                   const std::vector<MeasurementRecord>& records) {
  if (records.size() != ensemble.states().size()) {
    throw DimensionMismatch("write_records: one record per test state is required");
  }
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << kHeader << '\n';
  for (size_t k = 0; k < records.size(); ++k) {
    buf << "state ";
    std::visit(
        [&buf](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, CoherentState>) {
            buf << "coherent " << s.alpha.real() << ' ' << s.alpha.imag();
          } else {
            buf << "squeezed " << s.r << ' ' << s.sign;
          }
        },
        ensemble[static_cast<int>(k)]);
    const auto& r = records[k];
    buf << " | record " << r.mean_x << ' ' << r.mean_p << ' ' << r.var_x << ' ' << r.var_p
        << '\n';
  }
  out << buf.str();
}

}  // namespace qbench
