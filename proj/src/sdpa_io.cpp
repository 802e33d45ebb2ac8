#include "qbench/sdpa_io.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "qbench/backend.hpp"

namespace qbench {

namespace {

using Key = std::tuple<int, int, int>;  // block (1-based SDPA numbering), i, j

// Upper-triangle entries of one constraint matrix, duplicates summed.
std::map<Key, double> entries(const StandardSdp<double>& p, const SdpRow<double>& row, double scale) {
  std::map<Key, double> out;
  for (const auto& e : row.psd) {
    if (e.row > e.col) continue;  // both triangles are stored; keep one
    out[{e.block + 1, e.row + 1, e.col + 1}] += scale * e.value;
  }
  const int lp_block = static_cast<int>(p.block_dims.size()) + 1;
  for (const auto& [col, a] : row.lp) out[{lp_block, col + 1, col + 1}] += scale * a;
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_sdpa(std::ostream& out, const StandardSdp<double>& p) {
  const bool has_lp = p.lp_dim > 0;
  out << "* qbench standard-form problem: min <C,X> s.t. <A_i,X> = b_i\n";
  out << p.num_rows() << " = mDIM\n";
  out << p.block_dims.size() + (has_lp ? 1 : 0) << " = nBLOCK\n";
  for (int n : p.block_dims) out << n << ' ';
  if (has_lp) out << -p.lp_dim;
  out << " = bLOCKsTRUCT\n";
  for (int i = 0; i < p.num_rows(); ++i) out << (i ? " " : "") << num(p.rhs(i));
  out << '\n';
  auto dump = [&](int mat, const std::map<Key, double>& m) {
    for (const auto& [k, v] : m) {
      if (v == 0.0) continue;
      out << mat << ' ' << std::get<0>(k) << ' ' << std::get<1>(k) << ' ' << std::get<2>(k) << ' ' << num(v)
          << '\n';
    }
  };
  dump(0, entries(p, p.cost, -1.0));
  for (int i = 0; i < p.num_rows(); ++i) dump(i + 1, entries(p, p.rows[static_cast<size_t>(i)], 1.0));
}

void write_sdpa(std::ostream& out, const StandardSdp<std::complex<double>>& p) { write_sdpa(out, realify(p)); }

StandardSdp<double> read_sdpa(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next = [&]() -> std::string {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '*' || line[0] == '"') continue;
      for (char& c : line)
        if (c == ',' || c == '(' || c == ')' || c == '{' || c == '}') c = ' ';
      return line;
    }
    throw ParseError("unexpected end of SDPA file", lineno + 1, 1);
  };
  StandardSdp<double> p;
  int m = 0, nblocks = 0;
  if (!(std::istringstream(next()) >> m) || m < 0) throw ParseError("bad mDIM", lineno, 1);
  if (!(std::istringstream(next()) >> nblocks) || nblocks < 0) throw ParseError("bad nBLOCK", lineno, 1);
  std::vector<int> sizes;
  {
    std::istringstream ss(next());
    for (int k = 0; k < nblocks; ++k) {
      int s = 0;
      if (!(ss >> s) || s == 0) throw ParseError("bad bLOCKsTRUCT", lineno, 1);
      sizes.push_back(s);
    }
  }
  int lp_block = -1;
  for (int k = 0; k < nblocks; ++k) {
    if (sizes[static_cast<size_t>(k)] < 0) {
      if (lp_block >= 0) throw ParseError("more than one diagonal block", lineno, 1);
      lp_block = k;
      p.lp_dim = -sizes[static_cast<size_t>(k)];
    } else {
      p.block_dims.push_back(sizes[static_cast<size_t>(k)]);
    }
  }
  p.rhs.resize(m);
  {
    std::istringstream ss(next());
    for (int i = 0; i < m; ++i)
      if (!(ss >> p.rhs(i))) throw ParseError("short objective vector", lineno, 1);
  }
  p.rows.resize(static_cast<size_t>(m));
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ss(line);
    int mat = 0, blk = 0, i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> mat >> blk >> i >> j >> v)) throw ParseError("expected 'mat block i j value'", lineno, 1);
    if (mat < 0 || mat > m || blk < 1 || blk > nblocks) throw ParseError("index out of range", lineno, 1);
    SdpRow<double>& row = mat == 0 ? p.cost : p.rows[static_cast<size_t>(mat - 1)];
    const double val = mat == 0 ? -v : v;
    if (blk - 1 == lp_block) {
      row.lp.push_back({i - 1, val});
      continue;
    }
    const int b = blk - 1 - (lp_block >= 0 && blk - 1 > lp_block ? 1 : 0);
    row.psd.push_back({b, i - 1, j - 1, val});
    if (i != j) row.psd.push_back({b, j - 1, i - 1, val});
  }
  return p;
}

}  // namespace qbench
