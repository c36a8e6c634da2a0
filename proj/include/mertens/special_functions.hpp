#pragma once

#include <cstdint>
#include <stdexcept>

#include "mertens/evaluated_real.hpp"

namespace mertens {

class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Riemann zeta for real s > 1, Euler-Maclaurin with 64 direct terms and
// Bernoulli corrections through B8. err_bound is the first omitted (B10)
// correction.
EvaluatedReal zeta(double s);

// zeta(s) - 1 without cancellation; accurate when zeta(s) is close to 1.
EvaluatedReal zeta_minus_one(double s);

// ln zeta(s) = log1p(zeta(s) - 1).
EvaluatedReal log_zeta(double s);

// Hurwitz zeta: sum over k >= 0 of (k + a)^-s, s > 1, a > 0.
EvaluatedReal hurwitz_zeta(double s, double a);

// Sum over n >= 2 of ln(n) / n^s, i.e. -zeta'(s), for s > 1.
EvaluatedReal log_weighted_zeta(double s);

// Prime zeta P(s) = sum over primes of p^-s, recovered as
// sum_k mu(k)/k * ln zeta(k s). The series stops once a geometric bound
// on the remaining terms is below tol / 2; that bound is err_bound.
EvaluatedReal prime_zeta(double s, double tol = 1e-15);

// Euler's constant from H_N - ln N with Bernoulli corrections.
EvaluatedReal euler_gamma();

// E1(x) = integral from x to infinity of e^-t / t, x > 0.
EvaluatedReal exp_integral_e1(double x);

namespace detail {
// Convergent power series; used for x <= 1.
EvaluatedReal e1_series(double x);
// Modified Lentz continued fraction; used for x > 1.
EvaluatedReal e1_continued_fraction(double x);
} // namespace detail

// Tail of a positive sum with |f'| decreasing: R_n = f(n+1) + f(n+2) + ...
// lies between I + f'(n+1)/8 and I, where I is the integral of f from
// n + 1/2 to infinity. Returns the midpoint of that bracket.
template <class Integral, class Derivative>
EvaluatedReal half_offset_tail(double n, Integral&& integral_from, Derivative&& fprime) {
  const double integral = integral_from(n + 0.5);
  const double slope = fprime(n + 1.0); // negative
  return {integral + slope / 16.0, -slope / 16.0};
}

struct LogWeightedTail {
  EvaluatedReal direct; // explicit sum to a cutoff plus an E1 tail
  EvaluatedReal boas;   // half-offset Euler-Maclaurin bracket
};

// Sum over n > G of 1 / (n^(1+rho) ln n), by both routes.
// Requires G >= 3 and 0 < rho <= 1.
LogWeightedTail log_weighted_tail(std::uint64_t G, double rho);
EvaluatedReal log_weighted_tail_direct(std::uint64_t G, double rho);
EvaluatedReal log_weighted_tail_boas(std::uint64_t G, double rho);

// Stirling remainder ln(n!) - (n ln n - n + ln(n)/2 + ln sqrt(2 pi)),
// evaluated as sum_{j>=2} (j-1)/(2j(j+1)) * hurwitz_zeta(j, n+1) so that it
// keeps full relative precision for large n. n >= 1.
EvaluatedReal stirling_remainder(std::uint64_t n);

} // namespace mertens
