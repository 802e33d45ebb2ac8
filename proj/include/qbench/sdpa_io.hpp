#pragma once

// Problem dumps in the SDPA sparse format (.dat-s), for cross-checking with
// external solvers. Our standard form min <C,X> s.t. <A_i,X> = b_i is the
// SDPA dual problem, so the file holds c = b, F_0 = -C and F_i = A_i; an
// SDPA solver's primal objective is then minus ours. Complex problems are
// written through the real symmetric embedding. The linear part becomes a
// diagonal block (negative size).

#include <iosfwd>

#include "qbench/ipm.hpp"

namespace qbench {

void write_sdpa(std::ostream& out, const StandardSdp<double>& problem);
void write_sdpa(std::ostream& out, const StandardSdp<std::complex<double>>& problem);

/// Reads a file produced by write_sdpa back into standard form (real).
/// Throws ParseError on malformed input.
StandardSdp<double> read_sdpa(std::istream& in);

}  // namespace qbench
