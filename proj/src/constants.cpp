#include "mertens/constants.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mertens/compensated.hpp"
#include "mertens/prime_engine.hpp"
#include "mertens/special_functions.hpp"

namespace mertens {

namespace {

void check_tolerance(double tol) {
  if (!(tol >= kMinTolerance && tol <= kMaxTolerance))
    throw std::invalid_argument("tolerance must lie in [1e-15, 1e-3], got " + std::to_string(tol));
}

} // namespace

HResult compute_H(double tol) {
  check_tolerance(tol);
  static const MoebiusTable mu(256);
  HResult out;
  CompensatedSum acc;
  double err = 0.0;
  for (std::uint32_t n = 2; n <= mu.n_max(); ++n) {
    if (const int m = mu[n]; m != 0) {
      const EvaluatedReal lz = log_zeta(n);
      const double c = -m * lz.value / n;
      out.ledger.push_back({n, m, c});
      acc.add(c);
      err += lz.err_bound / n;
    }
    // For m >= 3, ln zeta(m) <= zeta(m) - 1 < 2^(1-m), so everything after n
    // is below sum_{m>n} 2^(1-m) / m <= 2^(1-n) / (n+1).
    const double tail = std::exp2(1.0 - n) / (n + 1.0);
    if (tail <= 0.5 * tol) {
      out.tail_bound = tail;
      out.last_n = n;
      out.H = {acc.value(), err + tail};
      return out;
    }
  }
  throw std::runtime_error("compute_H: series did not reach tolerance");
}

ConstantsBundle compute_B(double tol) {
  HResult h = compute_H(tol);
  ConstantsBundle b;
  b.tol = tol;
  b.gamma = euler_gamma();
  b.H = h.H;
  b.B = {b.gamma.value - b.H.value, b.gamma.err_bound + b.H.err_bound};
  b.ledger = std::move(h.ledger);
  b.tail_bound = h.tail_bound;
  return b;
}

EvaluatedReal H_direct(std::uint64_t prime_limit) {
  if (prime_limit < 1000) throw std::invalid_argument("H_direct: prime_limit must be >= 1000");
  constexpr double kTermFloor = 1e-18;
  CompensatedSum acc;
  std::uint64_t count = 0;
  for_each_prime(2, prime_limit, [&](std::uint64_t p) {
    const double inv = 1.0 / static_cast<double>(p);
    double power = inv * inv;
    double inner = 0.0;
    for (int k = 2; power >= kTermFloor; ++k) {
      inner += power / k;
      power *= inv;
    }
    acc.add(inner);
    ++count;
  });
  // Omitted primes: sum_{k>=2} p^-k / k <= 1 / (2p(p-1)), which telescopes
  // to 1/(2L) over n > L. Each prime's cut-off k-tail is below 1e-18.
  const double err = 0.5 / static_cast<double>(prime_limit) + kTermFloor * static_cast<double>(count);
  return {acc.value(), err};
}

} // namespace mertens
