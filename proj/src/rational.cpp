#include "fogndt/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace fogndt {
namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

cpp_int pow10(long exponent) {
  cpp_int result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

Rational parse_decimal(std::string_view text, std::string_view original) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) bad_number(original);
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }

  std::string_view int_part = text;
  std::string_view frac_part;
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad_number(original);
  if (!int_part.empty() && !all_digits(int_part)) bad_number(original);
  if (!frac_part.empty() && !all_digits(frac_part)) bad_number(original);

  // cpp_int reads a leading zero as an octal prefix.
  std::string digits = std::string(int_part) + std::string(frac_part);
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  cpp_int numerator(digits);
  exponent -= static_cast<long>(frac_part.size());

  Rational value = exponent >= 0 ? Rational(numerator * pow10(exponent))
                                 : Rational(numerator, pow10(-exponent));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) bad_number(original);

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_decimal(text.substr(0, slash), original);
    const Rational den = parse_decimal(text.substr(slash + 1), original);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(original) + "'");
    return num / den;
  }
  return parse_decimal(text, original);
}

std::string format_rational(const Rational& value) {
  const cpp_int num = boost::multiprecision::numerator(value);
  const cpp_int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();

  cpp_int rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) return num.str() + "/" + den.str();

  // den = 2^a 5^b, so num/den = num * 10^k / den / 10^k with k = max(a, b).
  const int places = std::max(twos, fives);
  const cpp_int scaled = num * pow10(places) / den;
  const bool negative = scaled < 0;
  std::string digits = (negative ? cpp_int(-scaled) : scaled).str();
  if (static_cast<int>(digits.size()) <= places) {
    digits.insert(0, static_cast<std::size_t>(places + 1 - static_cast<int>(digits.size())), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  return negative ? "-" + digits : digits;
}

}  // namespace fogndt
