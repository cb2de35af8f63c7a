#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace fogndt {

/// Exact arbitrary-precision rational. Expression templates are disabled so
/// that `auto` and mixed-type `std::max` behave like ordinary values.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

template <class Scalar>
inline constexpr bool is_exact_v = !std::is_floating_point_v<Scalar>;

/// Parses "3", "-0.25", "1.5e-2" or "1/11" into an exact rational.
/// Throws std::invalid_argument on anything else (including inf/nan).
Rational parse_rational(std::string_view text);

/// Shortest exact text form: a terminating decimal when the denominator has
/// only factors 2 and 5, otherwise "num/den". parse_rational inverts it.
std::string format_rational(const Rational& value);

template <class Scalar>
double to_double(const Scalar& x) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

template <class Scalar>
Scalar positive_part(const Scalar& x) {
  return x > Scalar(0) ? x : Scalar(0);
}

template <class Scalar>
Scalar abs_value(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

/// Equality used by certificates: exact for rationals, 1e-12 relative to
/// max(1, |a|, |b|) for floating point.
template <class Scalar>
bool nearly_equal(const Scalar& a, const Scalar& b) {
  if constexpr (is_exact_v<Scalar>) {
    return a == b;
  } else {
    const Scalar scale = std::max({Scalar(1), std::abs(a), std::abs(b)});
    return std::abs(a - b) <= Scalar(1e-12) * scale;
  }
}

/// Nonnegative extended real: a finite value or +infinity.
template <class Scalar>
class ExtendedReal {
 public:
  ExtendedReal() = default;
  explicit ExtendedReal(Scalar value) : value_(std::move(value)) {}

  static ExtendedReal infinity() {
    ExtendedReal x;
    x.infinite_ = true;
    return x;
  }

  bool is_infinite() const { return infinite_; }
  /// Only meaningful when finite.
  const Scalar& value() const { return value_; }

  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : to_double(value_);
  }

  /// min(*this, cap), always finite.
  Scalar clamped(const Scalar& cap) const {
    return (infinite_ || value_ > cap) ? cap : value_;
  }

  friend bool operator<=(const Scalar& lhs, const ExtendedReal& rhs) {
    return rhs.infinite_ || lhs <= rhs.value_;
  }
  friend bool operator>=(const Scalar& lhs, const ExtendedReal& rhs) {
    return !rhs.infinite_ && lhs >= rhs.value_;
  }
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Scalar value_{0};
  bool infinite_ = false;
};

}  // namespace fogndt
