#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dirrep {

// Real line extended with -inf/+inf as explicit symbols. Downstream formulas
// branch on the symbol instead of pushing floating-point infinities through
// arithmetic, so no inf-inf NaN can leak out of theta-dependent expressions.
class ExtendedReal {
 public:
  ExtendedReal() = default;

  // Accepts finite values and +-infinity; NaN is never a parameter value.
  ExtendedReal(double v) : value_(v) {
    if (std::isnan(v)) throw std::domain_error("ExtendedReal: NaN is not a value");
  }

  static ExtendedReal pos_inf() { return ExtendedReal(std::numeric_limits<double>::infinity()); }
  static ExtendedReal neg_inf() { return ExtendedReal(-std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_pos_inf() const { return std::isinf(value_) && value_ > 0.0; }
  bool is_neg_inf() const { return std::isinf(value_) && value_ < 0.0; }

  // Finite payload; asking an infinite symbol for one is a caller bug.
  double finite_value() const {
    if (!is_finite()) throw std::logic_error("ExtendedReal: finite_value() on an infinite symbol");
    return value_;
  }

  // -1 / 0 / +1, infinities counting with their sign.
  int sign() const { return value_ > 0.0 ? 1 : (value_ < 0.0 ? -1 : 0); }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

}  // namespace dirrep
