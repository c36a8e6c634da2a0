#include "mertens/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "mertens/accumulators.hpp"
#include "mertens/constants.hpp"
#include "mertens/verifier.hpp"

namespace mertens::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_plain(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + std::string(whole) + "'");
  return v;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::string_view whole) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) throw std::invalid_argument("integer overflow: '" + std::string(whole) + "'");
    r *= base;
  }
  return r;
}

// Parses "a..b" into a pair of counts.
std::pair<std::uint64_t, std::uint64_t> parse_range(std::string_view s, std::string_view whole) {
  const auto dots = s.find("..");
  if (dots == std::string_view::npos) throw std::invalid_argument("expected a..b in '" + std::string(whole) + "'");
  return {parse_count(s.substr(0, dots)), parse_count(s.substr(dots + 2))};
}

struct RunConfig {
  std::string command;
  std::string max_text;
  std::string schedule = "pow2";
  double tol = 1e-12;
  std::string format = "csv";
  std::string checkpoint_path;
  std::string input_path;
  std::string report_path;
  unsigned workers = 1;
  std::size_t segment_entries = std::size_t{1} << 20;
  bool force = false;
  bool resume = false;
  bool oracle = false;
  std::string prime_limit = "1e7";
  bool wolf_table = false;
  std::string only;

  std::optional<std::uint64_t> n_max;

  void validate() {
    if (!max_text.empty()) {
      try {
        n_max = parse_count(max_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--max: ") + e.what());
      }
      if (*n_max > kDeskScaleMax && !force)
        throw UsageError("--max " + std::to_string(*n_max) +
                         " exceeds the desk-scale limit 2^34; pass --force to run anyway");
    }
    if (workers < 1) throw UsageError("--workers must be >= 1");
    if (segment_entries < 64) throw UsageError("--segment must be >= 64");
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    if (!(tol >= kMinTolerance && tol <= kMaxTolerance))
      throw UsageError("--tol must lie in [1e-15, 1e-3]");
  }

  AccumulateOptions accumulate_options() const {
    AccumulateOptions o;
    o.sieve.workers = workers;
    o.sieve.segment_entries = segment_entries;
    o.budget = force ? UINT64_MAX : kDeskScaleMax;
    return o;
  }
};

fs::path resolve(const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0')
      return fs::path(dir) / path;
  }
  return path;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f.flush()) throw std::runtime_error("write to '" + path.string() + "' failed");
}

ordered_json to_json(const EvaluatedReal& r) {
  return ordered_json{{"value", r.value}, {"err_bound", r.err_bound}};
}

// --- sums ----------------------------------------------------------------------

std::string sums_summary(const CheckpointSeries& series, const std::string& format) {
  if (format == "json") {
    ordered_json rows = ordered_json::array();
    for (const auto& cp : series.checkpoints) {
      rows.push_back({{"x", cp.x}, {"pi", cp.pi}, {"recip_sum", cp.recip_sum()},
                      {"logp_over_p", cp.A()}, {"theta", cp.theta_value()}});
    }
    ordered_json doc{{"schema", "mertens-sums v1"}, {"checkpoints", rows}};
    return doc.dump(2) + "\n";
  }
  std::string out = "x,pi,recip_sum,logp_over_p,theta\n";
  for (const auto& cp : series.checkpoints) {
    out += std::to_string(cp.x) + ',' + std::to_string(cp.pi) + ',' + format_real(cp.recip_sum()) + ',' +
           format_real(cp.A()) + ',' + format_real(cp.theta_value()) + '\n';
  }
  return out;
}

int cmd_sums(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.n_max) throw UsageError("sums: --max is required");
  const auto schedule = parse_schedule(cfg.schedule, *cfg.n_max);
  const fs::path path = resolve(cfg.checkpoint_path.empty() ? "checkpoints.csv" : cfg.checkpoint_path);

  CheckpointSeries series;
  AccumulateDiagnostics diag;
  bool fresh = true;
  if (cfg.resume && fs::exists(path)) {
    const CheckpointSeries prior = load_checkpoints(path);
    series = extend(prior, *cfg.n_max, schedule, cfg.accumulate_options());
    err << "resumed from " << prior.checkpoints.size() << " checkpoint(s) in " << path.string() << "\n";
    fresh = false;
  } else {
    series = accumulate(*cfg.n_max, schedule, cfg.accumulate_options(), &diag);
  }
  save_checkpoints(series, path);
  out << sums_summary(series, cfg.format);
  if (fresh && !diag.naive_recip.empty()) {
    double drift = 0.0;
    for (std::size_t i = 0; i < diag.naive_recip.size(); ++i)
      drift = std::max(drift, std::fabs(series.checkpoints[i].recip_sum() - diag.naive_recip[i]));
    err << "max |compensated - naive| for sum 1/p: " << format_real(drift) << "\n";
  }
  err << "wrote " << series.checkpoints.size() << " checkpoint(s) to " << path.string() << "\n";
  return kAllPass;
}

// --- constants -------------------------------------------------------------------

int cmd_constants(RunConfig& cfg, std::ostream& out, std::ostream&) {
  const ConstantsBundle b = compute_B(cfg.tol);
  ordered_json ledger = ordered_json::array();
  for (const auto& t : b.ledger) ledger.push_back({{"n", t.n}, {"mu", t.mu}, {"term", t.contribution}});
  ordered_json doc{{"schema", "mertens-constants v1"},
                   {"tol", b.tol},
                   {"gamma", to_json(b.gamma)},
                   {"H", to_json(b.H)},
                   {"B", to_json(b.B)},
                   {"tail_bound", b.tail_bound},
                   {"ledger", ledger}};
  if (cfg.oracle) {
    std::uint64_t limit = 0;
    try {
      limit = parse_count(cfg.prime_limit);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--prime-limit: ") + e.what());
    }
    if (limit < 1000) throw UsageError("--prime-limit must be >= 1000");
    if (limit > 1'000'000'000 && !cfg.force) throw UsageError("--prime-limit above 1e9 needs --force");
    const EvaluatedReal hd = H_direct(limit);
    const double diff = std::fabs(b.H.value - hd.value);
    const double allowed = hd.err_bound + b.H.err_bound;
    doc["oracle"] = ordered_json{{"prime_limit", limit},
                                 {"H_direct", to_json(hd)},
                                 {"difference", diff},
                                 {"agreement_margin", allowed - diff},
                                 {"agree", diff <= allowed}};
  }
  out << doc.dump(2) << "\n";
  return kAllPass;
}

// --- verify ----------------------------------------------------------------------

std::string sense_name(BoundSense s) { return s == BoundSense::Upper ? "upper" : "lower"; }

std::string render_report(const VerifyOutcome& v, bool with_table, const std::string& format) {
  if (format == "json") {
    ordered_json reports = ordered_json::array();
    for (const auto& r : v.checks.reports) {
      reports.push_back({{"name", r.name}, {"params", r.params}, {"observed", r.observed},
                         {"bound", r.bound}, {"margin", r.margin}, {"sense", sense_name(r.sense)},
                         {"pass", r.pass}, {"note", r.note}});
    }
    ordered_json doc{{"schema", "mertens-report v1"}, {"pass", v.checks.all_pass()}, {"reports", reports},
                     {"notes", v.checks.notes}};
    if (with_table) {
      ordered_json rows = ordered_json::array();
      for (const auto& t : v.table) {
        rows.push_back({{"x", t.x}, {"true_error", t.true_error}, {"signed_error", t.signed_error},
                        {"schoenfeld_bound", t.schoenfeld_bound}, {"ratio", t.ratio}});
      }
      doc["table"] = rows;
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream s;
  s << "name,params,observed,bound,margin,sense,pass,note\n";
  for (const auto& r : v.checks.reports) {
    s << r.name << ',' << r.params << ',' << format_real(r.observed) << ',' << format_real(r.bound) << ','
      << format_real(r.margin) << ',' << sense_name(r.sense) << ',' << (r.pass ? "pass" : "FAIL") << ','
      << r.note << '\n';
  }
  for (const auto& n : v.checks.notes) s << "# note: " << n << '\n';
  if (with_table) {
    s << "\nx,true_error,signed_error,schoenfeld_bound,ratio\n";
    for (const auto& t : v.table) {
      s << t.x << ',' << format_real(t.true_error) << ',' << format_real(t.signed_error) << ','
        << format_real(t.schoenfeld_bound) << ',' << format_real(t.ratio) << '\n';
    }
  }
  return s.str();
}

int cmd_verify(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.input_path.empty() && !cfg.n_max) throw UsageError("verify: give --max or --input");

  VerifyOptions opts;
  opts.sieve.workers = cfg.workers;
  opts.sieve.segment_entries = cfg.segment_entries;
  opts.tol = cfg.tol;
  std::stringstream only(cfg.only);
  for (std::string item; std::getline(only, item, ',');)
    if (!item.empty()) opts.only.insert(item);
  for (const auto& n : opts.only) {
    const auto& names = verifier_check_names();
    if (std::find(names.begin(), names.end(), n) == names.end())
      throw UsageError("--only: unknown check '" + n + "'");
  }

  CheckpointSeries series;
  if (!cfg.input_path.empty()) series = load_checkpoints(resolve(cfg.input_path));
  if (cfg.n_max) {
    const auto schedule = parse_schedule(cfg.schedule, *cfg.n_max);
    series = extend(series, *cfg.n_max, schedule, cfg.accumulate_options());
  }
  if (!cfg.checkpoint_path.empty()) save_checkpoints(series, resolve(cfg.checkpoint_path));

  const VerifyOutcome outcome = run_verification(series, opts);
  const std::string text = render_report(outcome, cfg.wolf_table, cfg.format);
  if (cfg.report_path.empty())
    out << text;
  else
    write_file(resolve(cfg.report_path), text);

  std::size_t failed = 0;
  for (const auto& r : outcome.checks.reports) failed += r.pass ? 0 : 1;
  err << outcome.checks.reports.size() << " bound report(s), " << failed << " failed\n";
  return failed == 0 ? kAllPass : kBoundFailed;
}

} // namespace

std::uint64_t parse_count(std::string_view text) {
  if (const auto caret = text.find('^'); caret != std::string_view::npos)
    return checked_pow(parse_plain(text.substr(0, caret), text), parse_plain(text.substr(caret + 1), text), text);
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    const std::uint64_t mant = parse_plain(text.substr(0, e), text);
    const std::uint64_t scale = checked_pow(10, parse_plain(text.substr(e + 1), text), text);
    if (mant != 0 && scale > UINT64_MAX / mant) throw std::invalid_argument("integer overflow: '" + std::string(text) + "'");
    return mant * scale;
  }
  return parse_plain(text, text);
}

std::vector<std::uint64_t> parse_schedule(std::string_view text, std::uint64_t n_max) {
  std::vector<std::uint64_t> out;
  auto push_explicit = [&](std::uint64_t x) {
    if (x > n_max)
      throw std::invalid_argument("schedule threshold " + std::to_string(x) + " exceeds --max " + std::to_string(n_max));
    if (x < 1) throw std::invalid_argument("schedule thresholds must be >= 1");
    out.push_back(x);
  };
  auto push_powers = [&](std::uint64_t base, std::uint64_t lo, std::uint64_t hi, std::string_view item) {
    for (std::uint64_t k = lo; k <= hi; ++k) {
      const std::uint64_t v = checked_pow(base, k, item);
      if (v > n_max) break;
      out.push_back(v);
    }
  };

  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    start = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
    if (item.empty()) continue;
    if (item == "pow2") {
      push_powers(2, 16, 26, item);
    } else if (item.starts_with("pow2:") || item.starts_with("pow10:")) {
      const bool two = item.starts_with("pow2:");
      const auto [lo, hi] = parse_range(item.substr(two ? 5 : 6), item);
      push_powers(two ? 2 : 10, lo, hi, item);
    } else if (item.find("..") != std::string_view::npos) {
      const auto colon = item.find(':');
      const auto [lo, hi] = parse_range(item.substr(0, colon), item);
      const std::uint64_t step = colon == std::string_view::npos ? 1 : parse_count(item.substr(colon + 1));
      if (step == 0) throw std::invalid_argument("schedule step must be positive in '" + std::string(item) + "'");
      for (std::uint64_t x = lo; x <= hi; x += step) push_explicit(x);
    } else {
      push_explicit(parse_count(item));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("schedule '" + std::string(text) + "' selects no thresholds <= " + std::to_string(n_max));
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime reciprocal sums, Mertens' constant, and explicit-bound verification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_sieve_flags = [&](CLI::App* sub) {
    sub->add_option("--workers", cfg.workers, "Segments sieved concurrently");
    sub->add_option("--segment", cfg.segment_entries, "Odd entries per sieve segment");
    sub->add_flag("--force", cfg.force, "Allow --max above 2^34");
  };

  auto* sums = app.add_subcommand("sums", "Accumulate prime sums and write a checkpoint file");
  sums->add_option("--max", cfg.max_text, "Largest x (e.g. 2^24, 1e8)")->required();
  sums->add_option("--schedule", cfg.schedule, "Checkpoint schedule (pow2, a..b:step, comma list)");
  sums->add_option("--out", cfg.checkpoint_path, "Checkpoint file (default checkpoints.csv)");
  sums->add_flag("--resume", cfg.resume, "Extend an existing checkpoint file");
  sums->add_option("--format", cfg.format, "Summary format: csv or json");
  add_sieve_flags(sums);

  auto* constants = app.add_subcommand("constants", "Compute gamma, H and B as JSON");
  constants->add_option("--tol", cfg.tol, "Series tolerance in [1e-15, 1e-3]");
  constants->add_flag("--oracle", cfg.oracle, "Also compute H by direct summation over primes");
  constants->add_option("--prime-limit", cfg.prime_limit, "Prime bound for --oracle");
  constants->add_flag("--force", cfg.force, "Allow --prime-limit above 1e9");

  auto* verify = app.add_subcommand("verify", "Run the bound and identity checks");
  verify->add_option("--max", cfg.max_text, "Accumulate primes up to this x");
  verify->add_option("--input", cfg.input_path, "Existing checkpoint file to verify or extend");
  verify->add_option("--schedule", cfg.schedule, "Checkpoint schedule used with --max");
  verify->add_option("--save-checkpoints", cfg.checkpoint_path, "Write the checkpoint series here");
  verify->add_option("--report", cfg.report_path, "Write the report here instead of stdout");
  verify->add_option("--format", cfg.format, "Report format: csv or json");
  verify->add_option("--tol", cfg.tol, "Tolerance for the constants");
  verify->add_option("--only", cfg.only, "Comma-separated subset of checks");
  verify->add_flag("--wolf-table", cfg.wolf_table, "Emit the error-ratio table");
  add_sieve_flags(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    cfg.validate();
    if (sums->parsed()) return cmd_sums(cfg, out, err);
    if (constants->parsed()) return cmd_constants(cfg, out, err);
    return cmd_verify(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const CheckpointParseError& e) {
    err << "checkpoint parse error: " << e.what() << "\n";
  } catch (const BudgetError& e) {
    err << "refused: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsageError;
}

} // namespace mertens::cli
