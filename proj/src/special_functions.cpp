#include "mertens/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "mertens/compensated.hpp"
#include "mertens/prime_engine.hpp"

namespace mertens {

namespace {

// B_{2k} / (2k)! for k = 1..5. The last entry only feeds the error bound.
constexpr std::array<double, 5> kBernoulliOverFactorial = {
    1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0};

constexpr int kDirectTerms = 64;

// Euler-Maclaurin tail sum_{n >= N} f(n) given the integral from N, f(N) and
// the odd derivatives f', f''', ..., f^(9) at N.
EvaluatedReal em_tail(double integral, double f_at_n, const std::array<double, 5>& odd_derivs) {
  double v = integral + 0.5 * f_at_n;
  for (int k = 0; k < 4; ++k) v -= kBernoulliOverFactorial[k] * odd_derivs[k];
  return {v, std::fabs(kBernoulliOverFactorial[4] * odd_derivs[4])};
}

// sum_{k >= 0} (first + k)^-s with `count` explicit terms.
EvaluatedReal em_power_sum(double s, double first, int count) {
  const double n = first + count;
  const double log_n = std::log(n);
  const double n_pow = std::exp(-s * log_n); // N^-s
  std::array<double, 5> derivs{};
  double poch = 1.0; // (s)_m
  double pw = n_pow; // N^(-s-m)
  for (int m = 1, k = 0; m <= 9; ++m) {
    poch *= s + (m - 1);
    pw /= n;
    if (m % 2 == 1) derivs[k++] = -poch * pw;
  }
  const double integral = std::exp((1.0 - s) * log_n) / (s - 1.0);
  EvaluatedReal tail = em_tail(integral, n_pow, derivs);

  CompensatedSum acc;
  acc.add(tail.value);
  for (int k = count - 1; k >= 0; --k) acc.add(std::pow(first + k, -s));
  return {acc.value(), tail.err_bound};
}

void require_s_above_one(double s, const char* what) {
  if (!(s > 1.0)) throw DomainError(std::string(what) + ": requires s > 1");
}

const MoebiusTable& small_moebius() {
  static const MoebiusTable table(256);
  return table;
}

} // namespace

EvaluatedReal zeta_minus_one(double s) {
  require_s_above_one(s, "zeta");
  return em_power_sum(s, 2.0, kDirectTerms - 2);
}

EvaluatedReal zeta(double s) {
  const EvaluatedReal zm1 = zeta_minus_one(s);
  return {1.0 + zm1.value, zm1.err_bound};
}

EvaluatedReal log_zeta(double s) {
  const EvaluatedReal zm1 = zeta_minus_one(s);
  // d/dx log1p(x) <= 1
  return {std::log1p(zm1.value), zm1.err_bound};
}

EvaluatedReal hurwitz_zeta(double s, double a) {
  require_s_above_one(s, "hurwitz_zeta");
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: requires a > 0");
  return em_power_sum(s, a, kDirectTerms);
}

EvaluatedReal log_weighted_zeta(double s) {
  require_s_above_one(s, "log_weighted_zeta");
  const double n = kDirectTerms;
  const double log_n = std::log(n);
  const double n_pow = std::exp(-s * log_n);
  // f(t) = t^-s ln t;  f^(m)(t) = (-1)^m (s)_m t^(-s-m) [ln t - sum_{i<m} 1/(s+i)]
  std::array<double, 5> derivs{};
  double poch = 1.0;
  double pw = n_pow;
  double harmonic = 0.0;
  for (int m = 1, k = 0; m <= 9; ++m) {
    poch *= s + (m - 1);
    harmonic += 1.0 / (s + (m - 1));
    pw /= n;
    const double sign = (m % 2 == 1) ? -1.0 : 1.0;
    if (m % 2 == 1) derivs[k++] = sign * poch * pw * (log_n - harmonic);
  }
  const double sm1 = s - 1.0;
  const double integral = std::exp(-sm1 * log_n) * (log_n / sm1 + 1.0 / (sm1 * sm1));
  EvaluatedReal tail = em_tail(integral, n_pow * log_n, derivs);

  CompensatedSum acc;
  acc.add(tail.value);
  for (int k = kDirectTerms - 1; k >= 2; --k) acc.add(std::log(k) * std::pow(k, -s));
  return {acc.value(), tail.err_bound};
}

EvaluatedReal prime_zeta(double s, double tol) {
  require_s_above_one(s, "prime_zeta");
  if (!(tol > 0.0)) throw std::invalid_argument("prime_zeta: tol must be positive");
  const MoebiusTable& mu = small_moebius();
  const double ratio = std::exp2(-s);
  CompensatedSum acc;
  double err = 0.0;
  for (std::uint64_t k = 1;; ++k) {
    if (k > mu.n_max()) throw std::runtime_error("prime_zeta: series did not reach tolerance");
    if (const int m = mu[k]; m != 0) {
      const EvaluatedReal lz = log_zeta(static_cast<double>(k) * s);
      acc.add(m * lz.value / static_cast<double>(k));
      err += lz.err_bound / static_cast<double>(k);
    }
    // zeta(m) - 1 <= 2^-m (1 + 2/(m-1)); the k' > k terms then fall off
    // geometrically with ratio 2^-s.
    const double next = static_cast<double>(k + 1) * s;
    const double tail = std::exp2(-next) * (1.0 + 2.0 / (next - 1.0)) /
                        (static_cast<double>(k + 1) * (1.0 - ratio));
    if (tail < 0.5 * tol) return {acc.value(), err + tail};
  }
}

EvaluatedReal euler_gamma() {
  static const EvaluatedReal gamma = [] {
    constexpr int n = kDirectTerms;
    CompensatedSum h;
    for (int k = n; k >= 1; --k) h.add(1.0 / k);
    const double n2 = double{n} * n;
    h.add(-std::log(double{n}));
    h.add(-0.5 / n);
    h.add(1.0 / (12.0 * n2));
    h.add(-1.0 / (120.0 * n2 * n2));
    h.add(1.0 / (252.0 * n2 * n2 * n2));
    h.add(-1.0 / (240.0 * n2 * n2 * n2 * n2));
    return EvaluatedReal{h.value(), 1.0 / (132.0 * std::pow(n2, 5))};
  }();
  return gamma;
}

namespace detail {

EvaluatedReal e1_series(double x) {
  const EvaluatedReal g = euler_gamma();
  CompensatedSum acc;
  acc.add(-g.value);
  acc.add(-std::log(x));
  double power_over_fact = 1.0; // x^k / k!
  double term = 0.0;
  for (int k = 1; k < 200; ++k) {
    power_over_fact *= x / k;
    term = ((k % 2 == 1) ? 1.0 : -1.0) * power_over_fact / k;
    acc.add(term);
    if (std::fabs(term) < 1e-18 * std::fabs(acc.value())) {
      const double next = power_over_fact * x / ((k + 1.0) * (k + 1.0));
      return {acc.value(), next + g.err_bound};
    }
  }
  return {acc.value(), std::fabs(term) + g.err_bound};
}

EvaluatedReal e1_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-17;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  double delta = 0.0;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    delta = c * d;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  const double value = h * std::exp(-x);
  return {value, std::max(std::fabs(delta - 1.0), 1e-16) * value};
}

} // namespace detail

EvaluatedReal exp_integral_e1(double x) {
  if (!(x > 0.0)) throw DomainError("exp_integral_e1: requires x > 0");
  return x <= 1.0 ? detail::e1_series(x) : detail::e1_continued_fraction(x);
}

namespace {

void check_tail_args(std::uint64_t G, double rho) {
  if (G < 3) throw DomainError("log_weighted_tail: requires G >= 3");
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("log_weighted_tail: requires 0 < rho <= 1");
}

double log_weighted_term(double x, double rho) {
  const double lx = std::log(x);
  return std::exp(-(1.0 + rho) * lx) / lx;
}

// Integral from a to infinity of dx / (x^(1+rho) ln x), which is E1(rho ln a).
EvaluatedReal log_weighted_integral(double a, double rho) {
  return exp_integral_e1(rho * std::log(a));
}

} // namespace

EvaluatedReal log_weighted_tail_direct(std::uint64_t G, double rho) {
  check_tail_args(G, rho);
  const std::uint64_t cutoff = std::max<std::uint64_t>(1'000'000, 100 * G);
  CompensatedSum acc;
  for (std::uint64_t n = cutoff; n > G; --n) acc.add(log_weighted_term(static_cast<double>(n), rho));

  // f is convex and decreasing, so sum_{n > N} f(n) lies in
  // [I(N) - f(N)/2, I(N) - f(N + 1/2)/2].
  const double n = static_cast<double>(cutoff);
  const EvaluatedReal integral = log_weighted_integral(n, rho);
  const double f_n = log_weighted_term(n, rho);
  const double f_half = log_weighted_term(n + 0.5, rho);
  acc.add(integral.value);
  acc.add(-0.25 * (f_n + f_half));
  return {acc.value(), 0.25 * (f_n - f_half) + integral.err_bound};
}

EvaluatedReal log_weighted_tail_boas(std::uint64_t G, double rho) {
  check_tail_args(G, rho);
  double integral_err = 0.0;
  const EvaluatedReal r = half_offset_tail(
      static_cast<double>(G),
      [&](double a) {
        const EvaluatedReal e = log_weighted_integral(a, rho);
        integral_err = e.err_bound;
        return e.value;
      },
      [&](double x) {
        const double lx = std::log(x);
        return -((1.0 + rho) * lx + 1.0) * std::exp(-(2.0 + rho) * lx) / (lx * lx);
      });
  return {r.value, r.err_bound + integral_err};
}

LogWeightedTail log_weighted_tail(std::uint64_t G, double rho) {
  return {log_weighted_tail_direct(G, rho), log_weighted_tail_boas(G, rho)};
}

EvaluatedReal stirling_remainder(std::uint64_t n) {
  if (n < 1) throw DomainError("stirling_remainder: requires n >= 1");
  const double a = static_cast<double>(n) + 1.0;
  CompensatedSum acc;
  double err = 0.0;
  for (int j = 2; j < 400; ++j) {
    const double c = (j - 1.0) / (2.0 * j * (j + 1.0));
    const EvaluatedReal hz = hurwitz_zeta(j, a);
    const double term = c * hz.value;
    acc.add(term);
    err += c * hz.err_bound;
    if (term < 1e-18 * acc.value()) return {acc.value(), err + term / (a - 1.0)};
  }
  throw std::runtime_error("stirling_remainder: series did not converge");
}

} // namespace mertens
