#include "mertens/accumulators.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace mertens {

namespace {

void validate(std::uint64_t n_max, std::span<const std::uint64_t> schedule,
              const AccumulateOptions& opts) {
  if (n_max > opts.budget) {
    throw BudgetError("n_max " + std::to_string(n_max) + " exceeds the configured budget of " +
                      std::to_string(opts.budget) + "; raise the budget to proceed");
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1) throw std::invalid_argument("schedule thresholds must be >= 1");
    if (schedule[i] > n_max)
      throw std::invalid_argument("schedule threshold " + std::to_string(schedule[i]) +
                                  " exceeds n_max " + std::to_string(n_max));
    if (i > 0 && schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("schedule must be strictly ascending");
  }
}

std::string describe(std::uint64_t n_max, std::size_t count) {
  return "n_max=" + std::to_string(n_max) + " thresholds=" + std::to_string(count);
}

// Streams primes in [lo, schedule.back()] on top of `state`, appending a
// checkpoint to `out` at each threshold.
void run(SumCheckpoint state, std::uint64_t lo, std::span<const std::uint64_t> schedule,
         const AccumulateOptions& opts, std::vector<SumCheckpoint>& out,
         AccumulateDiagnostics* diag, double naive) {
  if (schedule.empty()) return;
  std::size_t next = 0;
  auto emit = [&](std::uint64_t x) {
    SumCheckpoint cp = state;
    cp.x = x;
    out.push_back(cp);
    if (diag) diag->naive_recip.push_back(naive);
  };
  for_each_prime(lo, schedule.back(), [&](std::uint64_t p) {
    while (next < schedule.size() && schedule[next] < p) emit(schedule[next++]);
    const double dp = static_cast<double>(p);
    const double lp = std::log(dp);
    ++state.pi;
    state.recip.add(1.0 / dp);
    state.logp_over_p.add(lp / dp);
    state.theta.add(lp);
    naive += 1.0 / dp;
  }, opts.sieve);
  while (next < schedule.size()) emit(schedule[next++]);
}

} // namespace

CheckpointSeries accumulate(std::uint64_t n_max, std::span<const std::uint64_t> schedule,
                            const AccumulateOptions& opts, AccumulateDiagnostics* diag) {
  validate(n_max, schedule, opts);
  CheckpointSeries series;
  series.schedule = describe(n_max, schedule.size());
  series.checkpoints.reserve(schedule.size());
  if (diag) diag->naive_recip.clear();
  run(SumCheckpoint{}, 2, schedule, opts, series.checkpoints, diag, 0.0);
  return series;
}

CheckpointSeries extend(const CheckpointSeries& series, std::uint64_t n_max,
                        std::span<const std::uint64_t> schedule, const AccumulateOptions& opts) {
  if (series.empty()) return accumulate(n_max, schedule, opts);
  const SumCheckpoint& last = series.back();
  std::vector<std::uint64_t> fresh;
  for (std::uint64_t x : schedule)
    if (x > last.x) fresh.push_back(x);
  validate(n_max, fresh, opts);
  CheckpointSeries out = series;
  out.schedule = describe(n_max, series.checkpoints.size() + fresh.size());
  run(last, last.x + 1, fresh, opts, out.checkpoints, nullptr, 0.0);
  return out;
}

// --- file format -------------------------------------------------------------

namespace {

constexpr std::array<const char*, 8> kFields = {
    "x", "pi", "recip_sum", "recip_comp", "logp_over_p", "logp_comp", "theta", "theta_comp"};

std::uint64_t parse_uint(std::string_view s, std::size_t line, const char* field) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw CheckpointParseError(line, field, "expected an unsigned integer, got '" + std::string(s) + "'");
  return v;
}

double parse_double(std::string_view s, std::size_t line, const char* field) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
    throw CheckpointParseError(line, field, "expected a finite real, got '" + std::string(s) + "'");
  return v;
}

} // namespace

CheckpointParseError::CheckpointParseError(std::size_t line, std::string field,
                                           const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + what),
      line_(line),
      field_(std::move(field)) {}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string format_checkpoints(const CheckpointSeries& series) {
  std::string out = kCheckpointHeader;
  out += '\n';
  for (const auto& cp : series.checkpoints) {
    out += std::to_string(cp.x) + ',' + std::to_string(cp.pi);
    for (const CompensatedSum* s : {&cp.recip, &cp.logp_over_p, &cp.theta}) {
      out += ',' + format_real(s->raw_sum());
      out += ',' + format_real(s->compensation());
    }
    out += '\n';
  }
  return out;
}

CheckpointSeries parse_checkpoints(const std::string& text) {
  CheckpointSeries series;
  series.schedule = "loaded";
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view row = raw;
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (!header_seen) {
      if (row != kCheckpointHeader)
        throw CheckpointParseError(line, "header", "expected '" + std::string(kCheckpointHeader) + "'");
      header_seen = true;
      continue;
    }
    if (row.empty()) continue;

    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      cells.push_back(row.substr(start, comma == std::string_view::npos ? row.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() < kFields.size())
      throw CheckpointParseError(line, kFields[cells.size()],
                                 "row has " + std::to_string(cells.size()) + " of " +
                                     std::to_string(kFields.size()) + " fields");
    if (cells.size() > kFields.size())
      throw CheckpointParseError(line, "row", "row has more than " + std::to_string(kFields.size()) + " fields");

    SumCheckpoint cp;
    cp.x = parse_uint(cells[0], line, kFields[0]);
    cp.pi = parse_uint(cells[1], line, kFields[1]);
    double r[6];
    for (int i = 0; i < 6; ++i) r[i] = parse_double(cells[2 + i], line, kFields[2 + i]);
    cp.recip = CompensatedSum(r[0], r[1]);
    cp.logp_over_p = CompensatedSum(r[2], r[3]);
    cp.theta = CompensatedSum(r[4], r[5]);

    if (!series.checkpoints.empty()) {
      const auto& prev = series.checkpoints.back();
      if (cp.x <= prev.x) throw CheckpointParseError(line, "x", "thresholds must be strictly increasing");
      if (cp.pi < prev.pi) throw CheckpointParseError(line, "pi", "prime count decreased");
    }
    series.checkpoints.push_back(cp);
  }
  if (!header_seen) throw CheckpointParseError(1, "header", "file is empty");
  return series;
}

void save_checkpoints(const CheckpointSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << format_checkpoints(series);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

CheckpointSeries load_checkpoints(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoints(buf.str());
}

} // namespace mertens
