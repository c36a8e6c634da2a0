#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mertens::cli {

enum ExitCode : int { kAllPass = 0, kBoundFailed = 1, kUsageError = 2 };

// Largest --max accepted without --force.
inline constexpr std::uint64_t kDeskScaleMax = std::uint64_t{1} << 34;

// Environment variable naming the directory for relative output paths.
inline constexpr const char* kOutputDirEnv = "MERTENS_OUTPUT_DIR";

// Integer literal: "123", "2^20", "1e7". Throws std::invalid_argument.
std::uint64_t parse_count(std::string_view text);

// Schedule mini-language, comma separated:
//   pow2            2^16 .. min(n_max, 2^26)
//   pow2:a..b       2^a .. 2^b (capped at n_max); likewise pow10:a..b
//   a..b:step       arithmetic range
//   <count>         single threshold
// Result is sorted and deduplicated. Explicit thresholds above n_max and an
// empty result are errors.
std::vector<std::uint64_t> parse_schedule(std::string_view text, std::uint64_t n_max);

// Runs one command line (args excludes the program name). Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mertens::cli
