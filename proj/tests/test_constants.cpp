#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>

#include "mertens/constants.hpp"
#include "mertens/special_functions.hpp"

using namespace mertens;

TEST_CASE("H series ledger") {
  const HResult h = compute_H(1e-12);
  REQUIRE(h.ledger.size() >= 6);
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6;
  CHECK(h.ledger[0].n == 2);
  CHECK(h.ledger[0].contribution == doctest::Approx(std::log(pi2_6) / 2).epsilon(1e-14));
  CHECK(h.ledger[0].contribution == doctest::Approx(0.2488501512).epsilon(1e-9));

  const std::uint32_t ns[] = {2, 3, 5, 6, 7, 10};
  const int signs[] = {+1, +1, +1, -1, +1, -1};
  for (std::size_t i = 0; i < 6; ++i) {
    INFO("n = " << ns[i]);
    CHECK(h.ledger[i].n == ns[i]);
    CHECK((h.ledger[i].contribution > 0 ? 1 : -1) == signs[i]);
    CHECK(h.ledger[i].contribution ==
          doctest::Approx(-h.ledger[i].mu * std::log(boost::math::zeta(double(ns[i]))) / ns[i]).epsilon(1e-13));
  }
  CHECK(h.tail_bound <= 0.5e-12);
  CHECK(std::fabs(h.H.value - 0.31571845205) < 5e-11);
}

TEST_CASE("B = gamma - H") {
  const ConstantsBundle b = compute_B(1e-12);
  CHECK(b.gamma.value - b.H.value - b.B.value == 0.0);
  CHECK(std::fabs(b.B.value - 0.2614972128) < 5e-11);
  CHECK(b.B.err_bound < 1e-12);
  for (double tol : {1e-3, 1e-6, 1e-9, 1e-15}) {
    const ConstantsBundle t = compute_B(tol);
    INFO("tol = " << tol);
    CHECK(std::fabs(t.B.value - b.B.value) <= tol + b.B.err_bound);
    CHECK(t.B.err_bound <= tol);
  }
  CHECK_THROWS_AS(compute_B(1e-16), std::invalid_argument);
  CHECK_THROWS_AS(compute_H(0.1), std::invalid_argument);
  CHECK_THROWS_AS(compute_H(std::nan("")), std::invalid_argument);
}

TEST_CASE("direct prime summation of H") {
  const double H = compute_H(1e-12).H.value;
  const EvaluatedReal small = H_direct(1000);
  CHECK(std::fabs(small.value - H) < 2e-3);
  CHECK(std::fabs(small.value - H) <= small.err_bound);
  const EvaluatedReal big = H_direct(10'000'000);
  CHECK(std::fabs(big.value - H) < 2e-7);
  CHECK(std::fabs(big.value - H) <= big.err_bound);
  // Partial sums increase with the prime limit.
  double prev = 0.0;
  for (std::uint64_t L : {1000u, 10000u, 100000u, 1000000u}) {
    const double v = H_direct(L).value;
    CHECK(v > prev);
    CHECK(v < H);
    prev = v;
  }
  CHECK_THROWS_AS(H_direct(999), std::invalid_argument);
}
