#pragma once

#include <cmath>

namespace mertens {

// Neumaier's variant of Kahan summation. The running state is exactly
// (sum, compensation), so a sum can be persisted and resumed bit-for-bit.
class CompensatedSum {
public:
  constexpr CompensatedSum() = default;
  constexpr CompensatedSum(double sum, double compensation)
      : sum_(sum), comp_(compensation) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + comp_; }
  double raw_sum() const { return sum_; }
  double compensation() const { return comp_; }

  friend bool operator==(const CompensatedSum&, const CompensatedSum&) = default;

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace mertens
