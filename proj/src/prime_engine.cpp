#include "mertens/prime_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mertens {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

} // namespace

PrimeSegment::PrimeSegment(std::uint64_t lo, std::uint64_t hi)
    : lo_(std::max<std::uint64_t>(lo, 2)), hi_(std::max(hi, std::max<std::uint64_t>(lo, 2))) {
  const std::uint64_t odd = first_odd();
  odd_count_ = odd < hi_ ? static_cast<std::size_t>((hi_ - odd + 1) / 2) : 0;
  has_two_ = lo_ <= 2 && 2 < hi_;
  words_.assign((odd_count_ + 63) / 64, ~std::uint64_t{0});
  if (const std::size_t tail = odd_count_ % 64; tail != 0)
    words_.back() = (std::uint64_t{1} << tail) - 1;
}

bool PrimeSegment::is_prime(std::uint64_t n) const {
  if (n < lo_ || n >= hi_) return false;
  if (n == 2) return has_two_;
  if (n % 2 == 0) return false;
  const std::uint64_t i = (n - first_odd()) / 2;
  return (words_[i / 64] >> (i % 64)) & 1u;
}

std::uint64_t PrimeSegment::count() const {
  std::uint64_t c = has_two_ ? 1 : 0;
  for (std::uint64_t w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

std::vector<std::uint32_t> odd_base_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 3) return out;
  // composite[i] marks 2i+1
  std::vector<bool> composite(limit / 2 + 1, false);
  for (std::uint64_t p = 3; p * p <= limit; p += 2) {
    if (composite[p / 2]) continue;
    for (std::uint64_t m = p * p; m <= limit; m += 2 * p) composite[m / 2] = true;
  }
  for (std::uint32_t n = 3; n <= limit; n += 2)
    if (!composite[n / 2]) out.push_back(n);
  return out;
}

PrimeSegment sieve_segment(std::uint64_t lo, std::uint64_t hi,
                           std::span<const std::uint32_t> base) {
  PrimeSegment seg(lo, hi);
  if (seg.odd_count_ == 0) return seg;
  const std::uint64_t odd = seg.first_odd();
  if (odd == 1) seg.words_[0] &= ~std::uint64_t{1};
  auto* words = seg.words_.data();
  const std::uint64_t n_odd = seg.odd_count_;
  for (std::uint32_t p32 : base) {
    const std::uint64_t p = p32;
    const std::uint64_t sq = p * p;
    if (sq >= seg.hi_) break;
    std::uint64_t start = sq;
    if (start < odd) {
      start = (odd + p - 1) / p * p;
      if (start % 2 == 0) start += p;
    }
    for (std::uint64_t i = (start - odd) / 2; i < n_odd; i += p)
      words[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }
  return seg;
}

PrimeStream::PrimeStream(std::uint64_t lo, std::uint64_t last, SieveOptions opts)
    : next_lo_(std::max<std::uint64_t>(lo, 2)),
      end_(last < 2 ? 0 : last + 1),
      span_(2 * std::max<std::size_t>(opts.segment_entries, 64)),
      workers_(std::max(opts.workers, 1u)) {
  if (next_lo_ >= end_) {
    next_lo_ = end_;
    base_ = std::make_shared<const std::vector<std::uint32_t>>();
    return;
  }
  const std::uint64_t root = isqrt(last);
  if (root > 0xFFFFFFFFull) throw std::invalid_argument("prime stream bound too large");
  base_ = std::make_shared<const std::vector<std::uint32_t>>(
      odd_base_primes(static_cast<std::uint32_t>(root)));
}

void PrimeStream::launch_until_full() {
  while (inflight_.size() < workers_ && next_lo_ < end_) {
    const std::uint64_t lo = next_lo_;
    const std::uint64_t hi = std::min(end_, lo + span_);
    next_lo_ = hi;
    auto base = base_;
    const auto policy = workers_ > 1 ? std::launch::async : std::launch::deferred;
    inflight_.push_back(std::async(policy, [lo, hi, base] {
      return sieve_segment(lo, hi, *base);
    }));
  }
}

bool PrimeStream::next(PrimeSegment& out) {
  launch_until_full();
  if (inflight_.empty()) return false;
  out = inflight_.front().get();
  inflight_.pop_front();
  launch_until_full();
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n, SieveOptions opts) {
  std::vector<std::uint64_t> out;
  for_each_prime(2, n, [&](std::uint64_t p) { out.push_back(p); }, opts);
  return out;
}

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

MoebiusTable::MoebiusTable(std::uint64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("moebius table needs n_max >= 1");
  if (n_max > kMaxN)
    throw std::invalid_argument("moebius table limited to n_max <= " + std::to_string(kMaxN));
  const auto n = static_cast<std::uint32_t>(n_max);
  values_.assign(n + 1, 0);
  values_[1] = 1;
  std::vector<std::uint32_t> spf(n + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = i;
      values_[i] = -1;
      primes.push_back(i);
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t m = std::uint64_t{i} * p;
      if (p > spf[i] || m > n) break;
      spf[m] = p;
      values_[m] = (p == spf[i]) ? 0 : static_cast<std::int8_t>(-values_[i]);
    }
  }
}

MoebiusTable moebius_up_to(std::uint64_t n) { return MoebiusTable(n); }

std::uint64_t legendre_valuation(std::uint64_t n, std::uint64_t p) {
  if (!is_prime_trial(p))
    throw std::invalid_argument("legendre_valuation: " + std::to_string(p) + " is not prime");
  std::uint64_t e = 0;
  while (n >= p) {
    n /= p;
    e += n;
  }
  return e;
}

} // namespace mertens
