#pragma once

#include <cstdint>
#include <vector>

#include "mertens/evaluated_real.hpp"

namespace mertens {

// One term of H = -sum_{n>=2} mu(n) ln zeta(n) / n.
struct LedgerTerm {
  std::uint32_t n;
  int mu;
  double contribution; // -mu(n) ln zeta(n) / n
};

struct HResult {
  EvaluatedReal H;
  std::vector<LedgerTerm> ledger; // squarefree n only
  double tail_bound = 0.0;        // bound on all n past the last ledger term
  std::uint32_t last_n = 0;       // series cut after this n
};

struct ConstantsBundle {
  double tol = 0.0;
  EvaluatedReal gamma;
  EvaluatedReal H;
  EvaluatedReal B; // gamma - H
  std::vector<LedgerTerm> ledger;
  double tail_bound = 0.0;
};

inline constexpr double kMinTolerance = 1e-15;
inline constexpr double kMaxTolerance = 1e-3;

// Throws std::invalid_argument unless kMinTolerance <= tol <= kMaxTolerance.
HResult compute_H(double tol);
ConstantsBundle compute_B(double tol);

// H summed directly over primes: sum_p sum_{k>=2} p^-k / k, primes up to
// prime_limit (>= 1000). err_bound covers the omitted primes and the
// per-prime k cutoff.
EvaluatedReal H_direct(std::uint64_t prime_limit);

} // namespace mertens
