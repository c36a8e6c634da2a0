#pragma once

namespace mertens {

// Binary64 value plus a bound on its truncation error. Rounding is not
// included in err_bound; see kRoundingAllowance.
struct EvaluatedReal {
  double value = 0.0;
  double err_bound = 0.0;

  double lower() const { return value - err_bound; }
  double upper() const { return value + err_bound; }
  bool brackets(double exact) const { return lower() <= exact && exact <= upper(); }
};

// Relative allowance for floating-point rounding, applied on top of
// truncation bounds when deciding pass/fail.
inline constexpr double kRoundingAllowance = 1e-13;

} // namespace mertens
