#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <future>
#include <memory>
#include <span>
#include <vector>

namespace mertens {

// Primality bitmap for the integers in [lo, hi). Bit i stands for the odd
// integer first_odd() + 2*i; the prime 2 is carried as a flag.
class PrimeSegment {
public:
  PrimeSegment() = default;
  PrimeSegment(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::uint64_t first_odd() const { return lo_ | 1u; }
  std::size_t odd_count() const { return odd_count_; }

  bool is_prime(std::uint64_t n) const;
  std::uint64_t count() const;

  // Calls f(p) for every prime in [lo, hi), ascending.
  template <class F>
  void for_each(F&& f) const {
    if (has_two_) f(std::uint64_t{2});
    const std::uint64_t base = first_odd();
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word != 0) {
        const int bit = std::countr_zero(word);
        word &= word - 1;
        f(base + 2 * (std::uint64_t{64} * w + static_cast<std::uint64_t>(bit)));
      }
    }
  }

private:
  friend PrimeSegment sieve_segment(std::uint64_t, std::uint64_t,
                                    std::span<const std::uint32_t>);

  std::uint64_t lo_ = 2;
  std::uint64_t hi_ = 2;
  std::size_t odd_count_ = 0;
  bool has_two_ = false;
  std::vector<std::uint64_t> words_;
};

// Odd primes up to `limit` (inclusive) by a plain sieve. Used as the base
// set for segmented sieving; limit is at most sqrt of the stream bound.
std::vector<std::uint32_t> odd_base_primes(std::uint32_t limit);

// Sieves [lo, hi). `base` must contain every odd prime <= sqrt(hi - 1).
PrimeSegment sieve_segment(std::uint64_t lo, std::uint64_t hi,
                           std::span<const std::uint32_t> base);

struct SieveOptions {
  // Odd entries per segment; 2^20 bits is 128 KiB of bitmap.
  std::size_t segment_entries = std::size_t{1} << 20;
  // Segments sieved concurrently. Output order never depends on this.
  unsigned workers = 1;
};

// Pull-based stream of segments tiling [lo, last]. Never holds more than
// `workers` segments in memory.
class PrimeStream {
public:
  PrimeStream(std::uint64_t lo, std::uint64_t last, SieveOptions opts = {});

  // Next segment in ascending order; false once [lo, last] is exhausted.
  bool next(PrimeSegment& out);

private:
  void launch_until_full();

  std::uint64_t next_lo_;
  std::uint64_t end_; // exclusive
  std::uint64_t span_;
  unsigned workers_;
  std::shared_ptr<const std::vector<std::uint32_t>> base_;
  std::deque<std::future<PrimeSegment>> inflight_;
};

template <class F>
void for_each_prime(std::uint64_t lo, std::uint64_t last, F&& f, SieveOptions opts = {}) {
  PrimeStream stream(lo, last, opts);
  PrimeSegment seg;
  while (stream.next(seg)) seg.for_each(f);
}

// All primes in [2, n], ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n, SieveOptions opts = {});

// Trial division; intended for small arguments and argument validation.
bool is_prime_trial(std::uint64_t n);

class MoebiusTable {
public:
  // Largest table the linear sieve will build.
  static constexpr std::uint64_t kMaxN = 10'000'000;

  explicit MoebiusTable(std::uint64_t n_max);

  std::uint64_t n_max() const { return values_.size() - 1; }
  int operator[](std::uint64_t n) const { return values_.at(n); }

private:
  std::vector<std::int8_t> values_; // index 0 unused
};

MoebiusTable moebius_up_to(std::uint64_t n);

// Exponent of prime p in n!. Throws std::invalid_argument if p is not prime.
std::uint64_t legendre_valuation(std::uint64_t n, std::uint64_t p);

} // namespace mertens
