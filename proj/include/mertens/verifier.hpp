#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mertens/accumulators.hpp"
#include "mertens/constants.hpp"
#include "mertens/evaluated_real.hpp"

namespace mertens {

// Upper: the claim is observed < bound. Lower: the claim is observed > bound.
enum class BoundSense { Upper, Lower };

struct BoundReport {
  std::string name;
  std::string params;
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0; // positive when the claim holds
  BoundSense sense = BoundSense::Upper;
  bool pass = false;
  std::string note;
};

// Builds a report; margin and pass are derived from (observed, bound, sense)
// with the kRoundingAllowance slack.
BoundReport make_report(std::string name, std::string params, double observed, double bound,
                        BoundSense sense = BoundSense::Upper, std::string note = {});
bool recompute_pass(const BoundReport& r);

struct CheckResult {
  std::vector<BoundReport> reports;
  std::vector<std::string> notes;

  bool all_pass() const;
  void append(CheckResult other);
  void append(BoundReport r) { reports.push_back(std::move(r)); }
};

// theta(y) = sum of ln p for p <= y, for real y up to a fixed limit.
class ChebyshevTheta {
public:
  explicit ChebyshevTheta(std::uint64_t limit);
  double operator()(double y) const;
  // chi(y) = theta(y) + theta(y^(1/2)) + theta(y^(1/3)) + ...
  double chi(double y) const;
  std::uint64_t limit() const { return limit_; }

private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> primes_;
  std::vector<double> prefix_; // prefix_[i] = theta(primes_[i])
};

// |A(x) - ln x| < 2 at every checkpoint with x >= 2; for x >= 1e8 also
// ln x - A(x) within 0.01 of its limit 1.3325822757.
CheckResult check_grossehilfsatz1(const CheckpointSeries& series);

// theta(x) < 2x everywhere; 0.904x < theta(x) < 1.113x where x >= 38750.
CheckResult check_theta(const CheckpointSeries& series);

// chi(x) - chi(x/2) < x, for x > 1.
BoundReport check_chi_inequality(std::uint64_t x);
BoundReport check_chi_inequality(std::uint64_t x, const ChebyshevTheta& theta);

// Stirling bounds at real x >= 4 (upper bound on ln [x]!, lower bound on
// 2 ln [x/2]!) and, for integer x >= 5, |lambda| < 1 in
// ln n! = n ln n - n + ln(n)/2 + ln sqrt(2 pi) + lambda / (12 n).
CheckResult check_stirling(double x);

// Legendre's valuation summed against ln p reproduces ln n!.
BoundReport check_legendre_factorial(std::uint64_t n);

// sum_{p<=x} 1/p = pi(x)/x + integral_2^x pi(t)/t^2 dt, integral taken
// exactly over the step function pi.
CheckResult check_abel_pi_identity(const CheckpointSeries& series, SieveOptions sieve = {});

// Remainder between the prime tail and the log-weighted integer tail.
BoundReport check_remainder_identity(std::uint64_t G, double rho);

// Tail sum_{n>G} 1/(n^(1+rho) ln n) against ln(1/rho) - ln ln G - gamma.
CheckResult check_grossehilfsatz2(std::uint64_t G, std::span<const double> rhos);

struct ErrorTableRow {
  std::uint64_t x = 0;
  double signed_error = 0.0;     // sum 1/p - ln ln x - B
  double true_error = 0.0;       // |signed_error|
  double schoenfeld_bound = 0.0; // (3 ln x + 4) / (8 pi sqrt x)
  double ratio = 0.0;
};

struct ErrorTable {
  std::vector<ErrorTableRow> rows;
  CheckResult checks;
};

// Rows for checkpoints at powers of two >= 2^16; bound reports (Mertens,
// modern 4/ln x, Dusart, Schoenfeld) at every checkpoint with x >= 2.
ErrorTable mertens_error_table(const CheckpointSeries& series, const ConstantsBundle& bundle);

// Product theorem: -sum ln(1 - 1/p) = gamma + ln ln G + delta'.
CheckResult check_mertens_product(const CheckpointSeries& series, SieveOptions sieve = {});

// (3/2) * sum ln n / n^2 / (pi^2/6) < 9/pi^2 < 1, and the constant itself.
CheckResult check_constant_chain();

// --- full suite -------------------------------------------------------------

struct VerifyOptions {
  std::set<std::string> only; // empty = every check
  SieveOptions sieve;
  double tol = 1e-12;
};

struct VerifyOutcome {
  CheckResult checks;
  std::vector<ErrorTableRow> table;
};

// Check names accepted by VerifyOptions::only.
const std::vector<std::string>& verifier_check_names();

VerifyOutcome run_verification(const CheckpointSeries& series, const VerifyOptions& opts);

} // namespace mertens
