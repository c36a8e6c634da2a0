#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mertens/compensated.hpp"
#include "mertens/prime_engine.hpp"

namespace mertens {

// Running prime sums at integer threshold x, each kept as (sum, compensation).
struct SumCheckpoint {
  std::uint64_t x = 0;
  std::uint64_t pi = 0;
  CompensatedSum recip;       // sum of 1/p
  CompensatedSum logp_over_p; // A(x) = sum of ln p / p
  CompensatedSum theta;       // sum of ln p

  double recip_sum() const { return recip.value(); }
  double A() const { return logp_over_p.value(); }
  double theta_value() const { return theta.value(); }

  friend bool operator==(const SumCheckpoint&, const SumCheckpoint&) = default;
};

struct CheckpointSeries {
  std::string schedule;
  std::vector<SumCheckpoint> checkpoints;

  bool empty() const { return checkpoints.empty(); }
  const SumCheckpoint& back() const { return checkpoints.back(); }
};

// Largest n_max accepted without an explicit override.
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 34;

struct AccumulateOptions {
  SieveOptions sieve;
  std::uint64_t budget = kDefaultBudget;
};

// Uncompensated Σ1/p at each checkpoint, for reporting rounding drift.
struct AccumulateDiagnostics {
  std::vector<double> naive_recip;
};

class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Streams the primes <= n_max once and records a checkpoint at every
// threshold. Thresholds must be strictly ascending, >= 1 and <= n_max.
CheckpointSeries accumulate(std::uint64_t n_max, std::span<const std::uint64_t> schedule,
                            const AccumulateOptions& opts = {},
                            AccumulateDiagnostics* diag = nullptr);

// Continues an existing series past its last checkpoint. Only thresholds
// greater than the last recorded x are computed; the result is
// bit-identical to a single uninterrupted run.
CheckpointSeries extend(const CheckpointSeries& series, std::uint64_t n_max,
                        std::span<const std::uint64_t> schedule,
                        const AccumulateOptions& opts = {});

// Checkpoint file I/O -------------------------------------------------------

inline constexpr const char* kCheckpointHeader = "mertens-checkpoints v1";

class CheckpointParseError : public std::runtime_error {
public:
  CheckpointParseError(std::size_t line, std::string field, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

std::string format_checkpoints(const CheckpointSeries& series);
CheckpointSeries parse_checkpoints(const std::string& text);

void save_checkpoints(const CheckpointSeries& series, const std::filesystem::path& path);
CheckpointSeries load_checkpoints(const std::filesystem::path& path);

// Every persisted real: 17 significant digits, scientific notation.
std::string format_real(double v);

} // namespace mertens
