#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "addm/finite_ifs.hpp"

namespace addm {

// Line-based IFS description:
//
//   # comment
//   states: 0 1 2 3
//   label a: 1 2 3 0        (entry k is f_a(k))
//   metric:                 (optional, followed by one row per state)
//   0 1 1/2 1
//   ...
//
// Errors are ParseError with the 1-based line number.
FiniteIFS parse_ifs(std::string_view text);
FiniteIFS load_ifs(const std::filesystem::path& path);

/// Inverse of parse_ifs (metric block only when one was given).
std::string format_ifs(const FiniteIFS& ifs);

/// `p` or `p/q` with q > 0; throws InputError.
mpq_class parse_rational(std::string_view text);

}  // namespace addm
