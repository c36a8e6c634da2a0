#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mertens/prime_engine.hpp"

using namespace mertens;

namespace {

// Trial division, independent of the sieve.
bool slow_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int slow_moebius(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

} // namespace

TEST_CASE("sieve agrees with trial division below 1e5") {
  const auto primes = primes_up_to(100000);
  std::vector<char> mark(100001, 0);
  for (auto p : primes) mark[p] = 1;
  for (std::uint64_t n = 0; n <= 100000; ++n) REQUIRE(static_cast<bool>(mark[n]) == slow_is_prime(n));
  for (std::uint64_t n = 0; n <= 2000; ++n) CHECK(is_prime_trial(n) == slow_is_prime(n));
}

TEST_CASE("prime counts at small powers") {
  CHECK(primes_up_to(65536).size() == 6542);
  CHECK(primes_up_to(1000000).size() == 78498);
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(2) == std::vector<std::uint64_t>{2});
  CHECK(primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
}

TEST_CASE("segments tile the range for any segment size") {
  const std::uint64_t last = 10'000'000 - 1;
  std::uint64_t ref_count = 0, ref_sum = 0;
  for (std::size_t entries : {std::size_t{1} << 10, std::size_t{1} << 16, std::size_t{1} << 20}) {
    for (unsigned workers : {1u, 4u}) {
      SieveOptions opts{entries, workers};
      std::uint64_t count = 0, sum = 0, prev = 0;
      bool ordered = true;
      for_each_prime(2, last, [&](std::uint64_t p) {
        ordered = ordered && p > prev;
        prev = p;
        ++count;
        sum += p;
      }, opts);
      CHECK(ordered);
      CHECK(count == 664579);
      if (ref_count == 0) {
        ref_count = count;
        ref_sum = sum;
      }
      CHECK(sum == ref_sum);
    }
  }
}

TEST_CASE("stream starting mid-range") {
  std::vector<std::uint64_t> got;
  for_each_prime(90, 130, [&](std::uint64_t p) { got.push_back(p); });
  CHECK(got == std::vector<std::uint64_t>{97, 101, 103, 107, 109, 113, 127});
  PrimeSegment seg(0, 0);
  PrimeStream empty(50, 10);
  CHECK_FALSE(empty.next(seg));
}

TEST_CASE("segment count matches enumeration") {
  PrimeStream stream(2, 200000, SieveOptions{1 << 12, 2});
  PrimeSegment seg(0, 0);
  std::uint64_t total = 0;
  while (stream.next(seg)) {
    std::uint64_t n = 0;
    seg.for_each([&](std::uint64_t) { ++n; });
    CHECK(n == seg.count());
    total += n;
  }
  CHECK(total == 17984);
}

TEST_CASE("moebius agrees with factorisation and the divisor-sum identity") {
  const MoebiusTable mu = moebius_up_to(10000);
  for (std::uint64_t n = 1; n <= 10000; ++n) REQUIRE(mu[n] == slow_moebius(n));
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    int s = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
      if (n % d == 0) s += mu[d];
    REQUIRE(s == (n == 1 ? 1 : 0));
  }
  CHECK_THROWS(MoebiusTable(MoebiusTable::kMaxN + 1));
}

TEST_CASE("legendre valuation") {
  CHECK(legendre_valuation(100, 5) == 24);
  CHECK(legendre_valuation(100, 2) == 97);
  CHECK(legendre_valuation(1, 2) == 0);
  CHECK_THROWS_AS(legendre_valuation(100, 4), std::invalid_argument);
  for (std::uint64_t n = 2; n <= 500; ++n) {
    double s = 0.0;
    for (auto p : primes_up_to(n)) s += static_cast<double>(legendre_valuation(n, p)) * std::log(p);
    REQUIRE(s == doctest::Approx(std::lgamma(n + 1.0)).epsilon(1e-12));
  }
}
