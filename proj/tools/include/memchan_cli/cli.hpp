#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace memchan::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericFailure = 2 };

/// Parses "start:stop:step" (inclusive, start + i*step), a comma list, or a single number.
std::vector<double> parse_grid(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// %.17g, with "nan"/"inf" spelled out.
std::string format_number(double x);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memchan::cli
