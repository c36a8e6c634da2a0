#include "mertens/verifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "mertens/compensated.hpp"
#include "mertens/prime_engine.hpp"
#include "mertens/special_functions.hpp"

namespace mertens {

namespace {

constexpr double kDusartLimit = 1.3325822757;
constexpr double kLogMomentConstant = 0.9375482543;

std::string param(const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.17g", key, v);
  return buf;
}

std::string param(const char* key, std::uint64_t v) {
  return std::string(key) + "=" + std::to_string(v);
}

std::string join(const std::string& a, const std::string& b) { return a + ";" + b; }

std::uint64_t floor_root(double y, int k) {
  if (k == 1) return static_cast<std::uint64_t>(std::floor(y));
  auto m = static_cast<std::uint64_t>(std::floor(std::pow(y, 1.0 / k)));
  auto pow_le = [&](std::uint64_t b) {
    double acc = 1.0;
    for (int i = 0; i < k; ++i) acc *= static_cast<double>(b);
    return acc <= y;
  };
  while (m > 0 && !pow_le(m)) --m;
  while (pow_le(m + 1)) ++m;
  return m;
}

double log_factorial_summed(std::uint64_t n) {
  CompensatedSum acc;
  for (std::uint64_t k = 2; k <= n; ++k) acc.add(std::log(static_cast<double>(k)));
  return acc.value();
}

} // namespace

BoundReport make_report(std::string name, std::string params, double observed, double bound,
                        BoundSense sense, std::string note) {
  BoundReport r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.observed = observed;
  r.bound = bound;
  r.sense = sense;
  r.note = std::move(note);
  r.margin = sense == BoundSense::Upper ? bound - observed : observed - bound;
  r.pass = recompute_pass(r);
  return r;
}

bool recompute_pass(const BoundReport& r) {
  const double margin = r.sense == BoundSense::Upper ? r.bound - r.observed : r.observed - r.bound;
  const double slack = kRoundingAllowance * std::max(std::fabs(r.observed), std::fabs(r.bound));
  return std::isfinite(margin) && margin >= -slack;
}

bool CheckResult::all_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.pass; });
}

void CheckResult::append(CheckResult other) {
  for (auto& r : other.reports) reports.push_back(std::move(r));
  for (auto& n : other.notes) notes.push_back(std::move(n));
}

// --- theta / chi ---------------------------------------------------------------

ChebyshevTheta::ChebyshevTheta(std::uint64_t limit) : limit_(limit), primes_(primes_up_to(limit)) {
  prefix_.reserve(primes_.size());
  CompensatedSum acc;
  for (std::uint64_t p : primes_) {
    acc.add(std::log(static_cast<double>(p)));
    prefix_.push_back(acc.value());
  }
}

double ChebyshevTheta::operator()(double y) const {
  if (y < 2.0) return 0.0;
  const auto n = static_cast<std::uint64_t>(std::floor(y));
  if (n > limit_) throw std::out_of_range("ChebyshevTheta: argument beyond table limit");
  const auto it = std::upper_bound(primes_.begin(), primes_.end(), n);
  return it == primes_.begin() ? 0.0 : prefix_[static_cast<std::size_t>(it - primes_.begin()) - 1];
}

double ChebyshevTheta::chi(double y) const {
  CompensatedSum acc;
  for (int k = 1;; ++k) {
    const std::uint64_t r = floor_root(y, k);
    if (r < 2) break;
    acc.add((*this)(static_cast<double>(r)));
  }
  return acc.value();
}

CheckResult check_grossehilfsatz1(const CheckpointSeries& series) {
  if (series.empty()) throw std::invalid_argument("check_grossehilfsatz1: empty series");
  CheckResult out;
  for (const auto& cp : series.checkpoints) {
    if (cp.x < 2) {
      out.notes.push_back("grossehilfsatz1: skipped x=" + std::to_string(cp.x) + " (x < 2)");
      continue;
    }
    const double lx = std::log(static_cast<double>(cp.x));
    const double R = cp.A() - lx;
    out.append(make_report("grossehilfsatz1", param("x", cp.x), std::fabs(R), 2.0));
    if (cp.x >= 100'000'000) {
      out.append(make_report("dusart_limit", param("x", cp.x), std::fabs(-R - kDusartLimit), 0.01,
                             BoundSense::Upper, "engineering tolerance around the limit"));
    }
  }
  return out;
}

CheckResult check_theta(const CheckpointSeries& series) {
  if (series.empty()) throw std::invalid_argument("check_theta: empty series");
  CheckResult out;
  for (const auto& cp : series.checkpoints) {
    const double x = static_cast<double>(cp.x);
    const double th = cp.theta_value();
    out.append(make_report("theta_2x", param("x", cp.x), th, 2.0 * x));
    if (cp.x >= 38750) {
      out.append(make_report("theta_band_lower", param("x", cp.x), th, 0.904 * x, BoundSense::Lower));
      out.append(make_report("theta_band_upper", param("x", cp.x), th, 1.113 * x));
    }
  }
  return out;
}

BoundReport check_chi_inequality(std::uint64_t x, const ChebyshevTheta& theta) {
  if (x < 2) throw std::invalid_argument("check_chi_inequality: requires x > 1");
  const double xd = static_cast<double>(x);
  const double diff = theta.chi(xd) - theta.chi(xd / 2.0);
  return make_report("chi_half", param("x", x), diff, xd);
}

BoundReport check_chi_inequality(std::uint64_t x) {
  return check_chi_inequality(x, ChebyshevTheta(x));
}

CheckResult check_stirling(double x) {
  if (!(x >= 4.0)) throw std::invalid_argument("check_stirling: requires x >= 4");
  CheckResult out;
  const auto n = static_cast<std::uint64_t>(std::floor(x));
  const double nd = static_cast<double>(n);
  const double lx = std::log(x);
  const double log_sqrt_2pi = 0.5 * std::log(2.0 * std::numbers::pi);

  // Upper bound, rearranged as ln [x]! - (x ln x + ln(x)/2 - x + ln sqrt(2 pi)) < 1/(12x)
  // so that the comparison keeps precision when the margin is ~1/(360 x^3).
  const double f = x - nd;
  const double rel = std::log1p(f / nd);
  const double shift = nd * rel + f * lx - f + 0.5 * rel; // S(x) - S(n)
  const EvaluatedReal s_n = stirling_remainder(n);
  out.append(make_report("stirling_upper", param("x", x), s_n.value - shift, 1.0 / (12.0 * x)));

  const auto half = static_cast<std::uint64_t>(std::floor(x / 2.0));
  const double lhs = 2.0 * log_factorial_summed(half);
  const double rhs = x * lx - x * std::numbers::ln2 - lx - x + log_sqrt_2pi + std::numbers::ln2 -
                     2.0 / (x - 2.0);
  out.append(make_report("stirling_half_lower", param("x", x), lhs, rhs, BoundSense::Lower));

  if (f == 0.0 && n >= 5) {
    const double lambda = 12.0 * nd * s_n.value;
    out.append(make_report("stirling_lambda", param("n", n), std::fabs(lambda), 1.0,
                           BoundSense::Upper, "lambda=" + format_real(lambda)));
  }
  return out;
}

BoundReport check_legendre_factorial(std::uint64_t n) {
  if (n < 2 || n > 1'000'000) throw std::invalid_argument("check_legendre_factorial: requires 2 <= n <= 1e6");
  CompensatedSum by_primes;
  for_each_prime(2, n, [&](std::uint64_t p) {
    by_primes.add(static_cast<double>(legendre_valuation(n, p)) * std::log(static_cast<double>(p)));
  });
  const double direct = log_factorial_summed(n);
  return make_report("legendre_factorial", param("n", n), std::fabs(by_primes.value() - direct),
                     1e-8 * direct);
}

CheckResult check_abel_pi_identity(const CheckpointSeries& series, SieveOptions sieve) {
  CheckResult out;
  std::vector<const SumCheckpoint*> targets;
  for (const auto& cp : series.checkpoints) {
    if (cp.x >= 2)
      targets.push_back(&cp);
    else
      out.notes.push_back("abel: skipped x=" + std::to_string(cp.x) + " (x < 2)");
  }
  if (targets.empty()) return out;

  std::uint64_t count = 0;
  std::uint64_t last = 0;
  CompensatedSum integral; // integral_2^{p_count} pi(t)/t^2 dt
  std::size_t next = 0;
  auto emit = [&](const SumCheckpoint& cp) {
    const double x = static_cast<double>(cp.x);
    const double lp = static_cast<double>(last);
    CompensatedSum rhs = integral;
    rhs.add(static_cast<double>(count) / x);
    rhs.add(static_cast<double>(count) * (x - lp) / (lp * x));
    const double lhs = cp.recip_sum();
    const std::string p = param("x", cp.x);
    out.append(make_report("abel_pi_identity", p, std::fabs(lhs - rhs.value()), 1e-10 * lhs));
    out.append(make_report("abel_pi_count", p, std::fabs(static_cast<double>(cp.pi) - count), 0.0,
                           BoundSense::Upper, "checkpoint pi vs streamed primes"));
  };
  for_each_prime(2, targets.back()->x, [&](std::uint64_t p) {
    while (next < targets.size() && targets[next]->x < p) emit(*targets[next++]);
    if (count > 0) {
      const double a = static_cast<double>(last);
      const double b = static_cast<double>(p);
      integral.add(static_cast<double>(count) * static_cast<double>(p - last) / (a * b));
    }
    ++count;
    last = p;
  }, sieve);
  while (next < targets.size()) emit(*targets[next++]);
  return out;
}

BoundReport check_remainder_identity(std::uint64_t G, double rho) {
  if (G < 3 || !(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("check_remainder_identity: requires G >= 3 and 0 < rho <= 1");
  const double s = 1.0 + rho;
  CompensatedSum prime_tail;
  prime_tail.add(prime_zeta(s).value);
  for_each_prime(2, G, [&](std::uint64_t p) { prime_tail.add(-std::pow(static_cast<double>(p), -s)); });
  const EvaluatedReal integer_tail = log_weighted_tail_direct(G, rho);
  const double remainder = prime_tail.value() - integer_tail.value;
  const double lg1 = std::log(static_cast<double>(G) + 1.0);
  const double bound = 4.0 / lg1 + 1.0 / (static_cast<double>(G) * lg1);
  return make_report("remainder_identity", join(param("G", G), param("rho", rho)), std::fabs(remainder),
                     bound, BoundSense::Upper, "remainder=" + format_real(remainder));
}

CheckResult check_grossehilfsatz2(std::uint64_t G, std::span<const double> rhos) {
  if (G < 10) throw std::invalid_argument("check_grossehilfsatz2: requires G >= 10");
  if (rhos.empty()) throw std::invalid_argument("check_grossehilfsatz2: no rho values");
  const double lg = std::log(static_cast<double>(G));
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0.0 && rhos[i] < 1.0 / lg))
      throw std::invalid_argument("check_grossehilfsatz2: each rho must lie in (0, 1/ln G)");
    if (i > 0 && !(rhos[i] < rhos[i - 1]))
      throw std::invalid_argument("check_grossehilfsatz2: rho values must decrease");
  }
  const double gamma = euler_gamma().value;
  const double lambda_bound = 1.0 / (static_cast<double>(G) * lg);
  CheckResult out;
  std::vector<double> residuals;
  for (double rho : rhos) {
    const LogWeightedTail tail = log_weighted_tail(G, rho);
    const double residual = tail.direct.value - (std::log(1.0 / rho) - std::log(lg) - gamma);
    residuals.push_back(residual);
    const std::string p = join(param("G", G), param("rho", rho));
    out.append(make_report("grossehilfsatz2_residual", p, std::fabs(residual),
                           lambda_bound + 10.0 * rho * lg, BoundSense::Upper,
                           "residual=" + format_real(residual)));
    const double spread = tail.direct.err_bound + tail.boas.err_bound +
                          kRoundingAllowance * std::fabs(tail.direct.value);
    out.append(make_report("tail_route_agreement", p, std::fabs(tail.direct.value - tail.boas.value),
                           spread));
  }
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    out.append(make_report("grossehilfsatz2_monotone",
                           join(param("G", G), param("rho", rhos[i])), std::fabs(residuals[i]),
                           std::fabs(residuals[i - 1]), BoundSense::Upper,
                           "previous rho=" + format_real(rhos[i - 1])));
  }
  return out;
}

ErrorTable mertens_error_table(const CheckpointSeries& series, const ConstantsBundle& bundle) {
  ErrorTable table;
  const double B = bundle.B.value;
  for (const auto& cp : series.checkpoints) {
    if (cp.x < 2) {
      table.checks.notes.push_back("error_table: skipped x=" + std::to_string(cp.x) + " (x < 2)");
      continue;
    }
    const double x = static_cast<double>(cp.x);
    const double lx = std::log(x);
    // thresholds are integers, so ln ln [x] and ln ln x coincide
    const double delta = cp.recip_sum() - std::log(lx) - B;
    const std::string p = param("x", cp.x);

    table.checks.append(make_report("mertens_delta", p, std::fabs(delta),
                                    4.0 / std::log(x + 1.0) + 2.0 / (x * lx)));
    table.checks.append(make_report("modern_delta", p, std::fabs(delta), 4.0 / lx));
    const double dusart = 1.0 / (10.0 * lx * lx) + 4.0 / (15.0 * lx * lx * lx);
    table.checks.append(make_report("dusart_lower", p, delta, -dusart, BoundSense::Lower));
    if (cp.x >= 10372) table.checks.append(make_report("dusart_upper", p, delta, dusart));
    const double schoenfeld = (3.0 * lx + 4.0) / (8.0 * std::numbers::pi * std::sqrt(x));
    if (x >= 13.5) {
      table.checks.append(make_report("schoenfeld", p, std::fabs(delta), schoenfeld,
                                      BoundSense::Upper, "RH-conditional bound; empirical observation"));
    }
    if (cp.x >= 65536 && std::has_single_bit(cp.x)) {
      const double err = std::fabs(delta);
      table.rows.push_back({cp.x, delta, err, schoenfeld, err / schoenfeld});
    }
  }
  return table;
}

CheckResult check_mertens_product(const CheckpointSeries& series, SieveOptions sieve) {
  CheckResult out;
  std::vector<std::uint64_t> targets;
  for (const auto& cp : series.checkpoints) {
    if (cp.x >= 3)
      targets.push_back(cp.x);
    else
      out.notes.push_back("product: skipped x=" + std::to_string(cp.x) + " (x < 3)");
  }
  if (targets.empty()) return out;
  const double gamma = euler_gamma().value;
  CompensatedSum log_product; // ln prod 1/(1 - 1/p)
  std::size_t next = 0;
  auto emit = [&](std::uint64_t G) {
    const double g = static_cast<double>(G);
    const double lg = std::log(g);
    const double delta = log_product.value() - gamma - std::log(lg);
    const double bound = 4.0 / std::log(g + 1.0) + 2.0 / (g * lg) + 1.0 / (2.0 * g);
    out.append(make_report("mertens_product", param("G", G), std::fabs(delta), bound,
                           BoundSense::Upper, "delta'=" + format_real(delta)));
  };
  for_each_prime(2, targets.back(), [&](std::uint64_t p) {
    while (next < targets.size() && targets[next] < p) emit(targets[next++]);
    log_product.add(-std::log1p(-1.0 / static_cast<double>(p)));
  }, sieve);
  while (next < targets.size()) emit(targets[next++]);
  return out;
}

CheckResult check_constant_chain() {
  CheckResult out;
  const EvaluatedReal c = log_weighted_zeta(2.0);
  const double z2 = zeta(2.0).value;
  const double nine_over_pi2 = 9.0 / (std::numbers::pi * std::numbers::pi);
  out.append(make_report("log_moment_constant", "s=2", std::fabs(c.value - kLogMomentConstant), 1e-9,
                         BoundSense::Upper, "sum ln n / n^2=" + format_real(c.value)));
  out.append(make_report("constant_chain_first", "", 1.5 * c.value / z2, nine_over_pi2));
  out.append(make_report("constant_chain_second", "", nine_over_pi2, 1.0));
  return out;
}

// --- suite ---------------------------------------------------------------------

const std::vector<std::string>& verifier_check_names() {
  static const std::vector<std::string> names = {
      "grossehilfsatz1", "theta", "chi", "stirling", "legendre", "abel",
      "remainder", "grossehilfsatz2", "error_table", "product", "constant_chain"};
  return names;
}

VerifyOutcome run_verification(const CheckpointSeries& series, const VerifyOptions& opts) {
  const auto& names = verifier_check_names();
  for (const auto& n : opts.only)
    if (std::find(names.begin(), names.end(), n) == names.end())
      throw std::invalid_argument("unknown check '" + n + "'");
  auto enabled = [&](const char* name) { return opts.only.empty() || opts.only.count(name) > 0; };
  const bool have_series = !series.empty();

  VerifyOutcome out;
  auto& checks = out.checks;
  if (enabled("grossehilfsatz1") && have_series) checks.append(check_grossehilfsatz1(series));
  if (enabled("theta") && have_series) checks.append(check_theta(series));
  if (enabled("chi") && have_series) {
    constexpr std::uint64_t kChiLimit = std::uint64_t{1} << 24;
    std::uint64_t top = 0;
    for (const auto& cp : series.checkpoints)
      if (cp.x >= 2 && cp.x <= kChiLimit) top = cp.x;
    if (top >= 2) {
      const ChebyshevTheta theta(top);
      for (const auto& cp : series.checkpoints)
        if (cp.x >= 2 && cp.x <= top) checks.append(check_chi_inequality(cp.x, theta));
    }
  }
  if (enabled("stirling")) {
    for (double x : {4.0, 4.5, 7.5, 5.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6}) checks.append(check_stirling(x));
  }
  if (enabled("legendre")) {
    for (std::uint64_t n : {2u, 10u, 100u, 10000u}) checks.append(check_legendre_factorial(n));
  }
  if (enabled("abel") && have_series) checks.append(check_abel_pi_identity(series, opts.sieve));
  if (enabled("remainder")) {
    for (std::uint64_t G : {3u, 10u, 100u, 10000u})
      for (double rho : {1.0, 0.5, 0.1}) checks.append(check_remainder_identity(G, rho));
  }
  if (enabled("grossehilfsatz2")) {
    const double rhos[] = {1e-2, 1e-3, 1e-4};
    checks.append(check_grossehilfsatz2(10000, rhos));
    const double small[] = {1e-4};
    checks.append(check_grossehilfsatz2(10, small));
  }
  if (enabled("error_table") && have_series) {
    ErrorTable t = mertens_error_table(series, compute_B(opts.tol));
    out.table = std::move(t.rows);
    checks.append(std::move(t.checks));
  }
  if (enabled("product") && have_series) checks.append(check_mertens_product(series, opts.sieve));
  if (enabled("constant_chain")) checks.append(check_constant_chain());
  return out;
}

} // namespace mertens
