// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance          run every criterion
//   acceptance 4 9      run the listed criteria
// Exit status is nonzero when any selected criterion fails.

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mertens/accumulators.hpp"
#include "mertens/cli.hpp"
#include "mertens/constants.hpp"
#include "mertens/special_functions.hpp"
#include "mertens/verifier.hpp"

using namespace mertens;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kBTol = 5e-11;
constexpr double kHTol = 5e-11;
constexpr double kConstantsSeconds = 1.0;
constexpr double kOracleTol = 2e-7;
constexpr double kOracleSeconds = 60.0;
constexpr double kGammaTol = 1e-12;
constexpr double kGammaQuadTol = 1e-8;
constexpr int kWolfDigits = 6;
constexpr double kWolfSeconds = 120.0;
constexpr double kDusartLimitTol = 0.01;
constexpr double kLogMomentTol = 1e-9;
constexpr double kAbelRelTol = 1e-10;
constexpr double kLegendreRelTol = 1e-8;

constexpr double kPublishedB = 0.2614972128;
constexpr double kPublishedH = 0.31571845205;
constexpr double kDusartLimit = 1.3325822757;
constexpr double kLogMoment = 0.9375482543;

struct WolfRow {
  int k;
  double true_error;
  double schoenfeld;
};

constexpr std::array<WolfRow, 9> kWolf = {{
    {16, 2.43328226e-4, 5.79284588e-3},
    {17, 2.26479291e-4, 4.32469516e-3},
    {18, 1.11367788e-4, 3.21961962e-3},
    {19, 1.23916030e-4, 2.39088215e-3},
    {20, 5.58449145e-5, 1.77140815e-3},
    {21, 4.63383665e-5, 1.30970835e-3},
    {22, 3.20736392e-5, 9.66503244e-4},
    {23, 1.83353157e-5, 7.11987819e-4},
    {24, 1.10324946e-5, 5.23651207e-4},
}};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Agreement to d significant digits: both round to the same d-digit mantissa.
bool same_digits(double a, double b, int d) {
  char sa[64], sb[64];
  std::snprintf(sa, sizeof sa, "%.*e", d - 1, a);
  std::snprintf(sb, sizeof sb, "%.*e", d - 1, b);
  return std::string(sa) == sb;
}

unsigned workers() { return 4; }

Outcome c1_constants() {
  ConstantsBundle b;
  HResult h;
  const double t = seconds([&] {
    b = compute_B(1e-12);
    h = compute_H(1e-12);
  });
  const double db = std::fabs(b.B.value - kPublishedB);
  const double dh = std::fabs(h.H.value - kPublishedH);
  const bool pass = db < kBTol && dh < kHTol && t < kConstantsSeconds;
  return {pass, "B=" + fmt("%.13f", b.B.value) + " |dB|=" + fmt("%.2e", db) + " H=" + fmt("%.13f", h.H.value) +
                    " |dH|=" + fmt("%.2e", dh) + " t=" + fmt("%.3fs", t)};
}

Outcome c2_oracle() {
  EvaluatedReal direct;
  const double t = seconds([&] { direct = H_direct(10'000'000); });
  const double d = std::fabs(compute_H(1e-12).H.value - direct.value);
  return {d < kOracleTol && t < kOracleSeconds,
          "|H - H_direct(1e7)|=" + fmt("%.3e", d) + " t=" + fmt("%.2fs", t)};
}

Outcome c3_gamma() {
  // Independent oracle: H_n - ln n with Bernoulli corrections, n = 1e6.
  const long double n = 1e6L;
  long double h = 0.0L;
  for (long k = 1000000; k >= 1; --k) h += 1.0L / k;
  const long double oracle = h - std::log(n) - 1 / (2 * n) + 1 / (12 * n * n) - 1 / (120 * n * n * n * n);
  const double g = euler_gamma().value;
  const double d_oracle = std::fabs(g - static_cast<double>(oracle));
  const double d_ref = std::fabs(g - 0.5772156649015329);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double quad = integrator.integrate([](double v) { return std::log(v) * std::exp(-v); });
  const double d_quad = std::fabs(quad + g);
  return {d_oracle < kGammaTol && d_ref < kGammaTol && d_quad < kGammaQuadTol,
          "gamma=" + fmt("%.16f", g) + " |vs EM oracle|=" + fmt("%.1e", d_oracle) +
              " |int ln v e^-v dv + gamma|=" + fmt("%.1e", d_quad)};
}

Outcome c4_wolf() {
  std::vector<std::uint64_t> sched;
  for (const auto& r : kWolf) sched.push_back(std::uint64_t{1} << r.k);
  AccumulateOptions opts;
  opts.sieve.workers = workers();
  ErrorTable table;
  const double t = seconds([&] {
    const auto series = accumulate(sched.back(), sched, opts);
    table = mertens_error_table(series, compute_B(1e-12));
  });
  int col2 = 0, col3 = 0;
  double worst2 = 0.0;
  for (std::size_t i = 0; i < kWolf.size(); ++i) {
    const auto& row = table.rows.at(i);
    col2 += same_digits(row.true_error, kWolf[i].true_error, kWolfDigits);
    col3 += same_digits(row.schoenfeld_bound, kWolf[i].schoenfeld, kWolfDigits);
    worst2 = std::max(worst2, std::fabs(row.true_error / kWolf[i].true_error - 1.0));
  }
  const int n = static_cast<int>(kWolf.size());
  return {col2 == n && col3 == n && t < kWolfSeconds,
          "col2 " + std::to_string(col2) + "/" + std::to_string(n) + " (worst rel diff " + fmt("%.2e", worst2) +
              "), col3 " + std::to_string(col3) + "/" + std::to_string(n) + ", t=" + fmt("%.2fs", t)};
}

std::vector<std::uint64_t> desk_schedule() {
  std::vector<std::uint64_t> s;
  for (int k = 1; k <= 26; ++k) s.push_back(std::uint64_t{1} << k);
  for (std::uint64_t p = 10; p <= 100'000'000; p *= 10) s.push_back(p);
  s.push_back(38750);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

const CheckpointSeries& desk_series() {
  static const CheckpointSeries series = [] {
    AccumulateOptions opts;
    opts.sieve.workers = workers();
    const auto s = desk_schedule();
    return accumulate(s.back(), s, opts);
  }();
  return series;
}

Outcome c5_bound_suite() {
  const auto& series = desk_series();
  CheckResult r = check_grossehilfsatz1(series);
  r.append(check_theta(series));
  r.append(mertens_error_table(series, compute_B(1e-12)).checks);
  std::size_t failed = 0;
  for (const auto& rep : r.reports) failed += !rep.pass;

  // Same checks through the command line, which must exit 0.
  std::ostringstream out, err;
  const int code = cli::run({"verify", "--max", "1e8", "--schedule", "pow2:1..26,pow10:1..8,38750", "--only",
                             "grossehilfsatz1,theta,error_table", "--workers", std::to_string(workers())},
                            out, err);
  return {failed == 0 && code == 0, std::to_string(r.reports.size()) + " reports, " + std::to_string(failed) +
                                        " failed; verify exit code " + std::to_string(code)};
}

Outcome c6_dusart_limit() {
  for (const auto& cp : desk_series().checkpoints) {
    if (cp.x != 100'000'000) continue;
    const double v = std::log(1e8) - cp.A();
    const double d = std::fabs(v - kDusartLimit);
    return {d < kDusartLimitTol, "ln x - A(x) at 1e8 = " + fmt("%.10f", v) + ", distance " + fmt("%.2e", d)};
  }
  return {false, "no checkpoint at 1e8"};
}

Outcome c7_constant_chain() {
  const CheckResult r = check_constant_chain();
  const double c = log_weighted_zeta(2.0).value;
  const double d = std::fabs(c - kLogMoment);
  const double first = 1.5 * c / zeta(2.0).value;
  const double nine = 9.0 / (M_PI * M_PI);
  return {d < kLogMomentTol && first < nine && nine < 1.0 && r.all_pass(),
          "sum ln n/n^2=" + fmt("%.12f", c) + " |d|=" + fmt("%.1e", d) + "; " + fmt("%.6f", first) + " < " +
              fmt("%.6f", nine) + " < 1"};
}

Outcome c8_identities() {
  std::vector<std::uint64_t> sched;
  for (int k = 1; k <= 20; ++k) sched.push_back(std::uint64_t{1} << k);
  for (std::uint64_t x : {10u, 100u, 1000u, 10000u, 100000u, 1000000u}) sched.push_back(x);
  std::sort(sched.begin(), sched.end());
  const auto series = accumulate(sched.back(), sched);
  const CheckResult abel = check_abel_pi_identity(series);
  double worst_abel = 0.0;
  bool abel_ok = abel.all_pass();
  for (const auto& rep : abel.reports) {
    if (rep.name != "abel_pi_identity") continue;
    const double rel = rep.observed / (rep.bound / 1e-10);
    worst_abel = std::max(worst_abel, rel);
    abel_ok = abel_ok && rel < kAbelRelTol;
  }

  bool leg_ok = true;
  double worst_leg = 0.0;
  for (std::uint64_t n : {10u, 100u, 10000u}) {
    const BoundReport r = check_legendre_factorial(n);
    const double rel = r.observed / (r.bound / 1e-8);
    worst_leg = std::max(worst_leg, rel);
    leg_ok = leg_ok && r.pass && rel < kLegendreRelTol;
  }

  int sampled = 0;
  double worst_lambda = 0.0;
  bool lambda_ok = true;
  std::uint64_t prev = 0;
  for (int i = 0; i <= 400; ++i) {
    const auto n = static_cast<std::uint64_t>(std::llround(5.0 * std::pow(2e5, i / 400.0)));
    if (n == prev) continue;
    prev = n;
    ++sampled;
    const double lambda = 12.0 * static_cast<double>(n) * stirling_remainder(n).value;
    worst_lambda = std::max(worst_lambda, std::fabs(lambda));
    lambda_ok = lambda_ok && std::fabs(lambda) < 1.0 && check_stirling(static_cast<double>(n)).all_pass();
  }
  return {abel_ok && leg_ok && lambda_ok,
          "abel worst rel " + fmt("%.1e", worst_abel) + ", legendre worst rel " + fmt("%.1e", worst_leg) +
              ", max |lambda| " + fmt("%.15f", worst_lambda) + " over " + std::to_string(sampled) + " n"};
}

Outcome c9_grossehilfsatz2() {
  const std::vector<double> rhos = {1e-2, 1e-3, 1e-4};
  const CheckResult r = check_grossehilfsatz2(10000, rhos);
  std::vector<double> residuals;
  for (const auto& rep : r.reports)
    if (rep.name == "grossehilfsatz2_residual") residuals.push_back(rep.observed);
  const bool decreasing = residuals.size() == 3 && residuals[1] < residuals[0] && residuals[2] < residuals[1];
  const double final_bound = 1.0 / (1e4 * std::log(1e4)) + 10.0 * 1e-4 * std::log(1e4);
  const bool final_ok = !residuals.empty() && residuals.back() < final_bound;

  std::mt19937_64 rng(1874);
  std::uniform_int_distribution<std::uint64_t> g_dist(10, 100000);
  std::uniform_real_distribution<double> log_rho(std::log(1e-4), 0.0);
  int agree = 0;
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t G = g_dist(rng);
    const double rho = std::exp(log_rho(rng));
    const LogWeightedTail t = log_weighted_tail(G, rho);
    const double spread = t.direct.err_bound + t.boas.err_bound + kRoundingAllowance * std::fabs(t.direct.value);
    agree += std::fabs(t.direct.value - t.boas.value) <= spread;
  }
  std::string res;
  for (double v : residuals) res += fmt("%.3e ", v);
  return {decreasing && final_ok && agree == 20 && r.all_pass(),
          "|residual| " + res + "(final bound " + fmt("%.3e", final_bound) + "), routes agree " +
              std::to_string(agree) + "/20"};
}

Outcome c10_remainder() {
  int pass = 0, total = 0;
  double min_margin = 1e300;
  for (std::uint64_t G : {3u, 10u, 100u, 10000u}) {
    for (double rho : {1.0, 0.5, 0.1}) {
      const BoundReport r = check_remainder_identity(G, rho);
      ++total;
      pass += r.pass && r.observed < r.bound;
      min_margin = std::min(min_margin, r.margin);
    }
  }
  return {pass == total, std::to_string(pass) + "/" + std::to_string(total) + " pass, min margin " +
                             fmt("%.3e", min_margin)};
}

Outcome c11_determinism() {
  const fs::path dir = fs::temp_directory_path() / "mertens_acceptance_determinism";
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  };
  std::string reports[2];
  int codes[2];
  const char* workers_arg[2] = {"1", "7"};
  for (int i = 0; i < 2; ++i) {
    std::ostringstream out, err;
    const fs::path cp = dir / ("run" + std::to_string(i) + ".csv");
    codes[i] = cli::run({"verify", "--max", "2^20", "--workers", workers_arg[i], "--wolf-table",
                         "--save-checkpoints", cp.string()},
                        out, err);
    reports[i] = out.str();
  }
  const bool same_cp = slurp(dir / "run0.csv") == slurp(dir / "run1.csv");
  const bool same_report = reports[0] == reports[1] && !reports[0].empty();
  fs::remove_all(dir);
  return {same_cp && same_report && codes[0] == codes[1],
          std::string("checkpoints ") + (same_cp ? "identical" : "DIFFER") + ", reports " +
              (same_report ? "identical" : "DIFFER")};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

constexpr Criterion kCriteria[] = {
    {1, "constant reproduction", c1_constants},
    {2, "oracle equivalence", c2_oracle},
    {3, "gamma self-validation", c3_gamma},
    {4, "wolf table", c4_wolf},
    {5, "bound suite", c5_bound_suite},
    {6, "dusart limit", c6_dusart_limit},
    {7, "constant chain", c7_constant_chain},
    {8, "identity checks", c8_identities},
    {9, "grossehilfsatz 2", c9_grossehilfsatz2},
    {10, "remainder bound", c10_remainder},
    {11, "determinism", c11_determinism},
};

} // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  criterion %2d  %-22s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
