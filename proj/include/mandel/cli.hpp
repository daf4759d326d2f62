// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mandel/certifier.hpp"
#include "mandel/exact_arith.hpp"
#include "mandel/json_io.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace mandel::cli {

inline constexpr int kExitIn = 0;
inline constexpr int kExitOut = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitRuntime = 4;

/// 0 for In, 1 for Out, 2 for Unknown.
int exit_code(const Verdict& v);

/// "p/q" (a constant oracle) or "sqrt(p/q)".
RealOracle parse_oracle(std::string_view text);
bool is_rational_text(std::string_view text);

/// Summary table of decidability results: rows this library can check are
/// computed with witnesses, the rest are reported as untested literature.
io::Json decidability_table();
std::string format_table_text(const io::Json& table);

/// Entry point behind the `mandelcert` executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mandel::cli
