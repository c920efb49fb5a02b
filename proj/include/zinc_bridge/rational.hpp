#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace zb {

using Integer = mpz_class;

/// Exact arbitrary-precision rational number. Always kept in canonical form
/// (reduced, positive denominator).
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t v);  // NOLINT(google-explicit-constructor)
  Rational(int v) : Rational(static_cast<std::int64_t>(v)) {}  // NOLINT
  explicit Rational(const Integer& v) : q_(v) {}
  Rational(const Integer& num, const Integer& den);
  explicit Rational(mpq_class q);

  /// Parses an integer or decimal literal ("-12", "0.25", "1.5e-3",
  /// "3.402823e+38") into its exact value. Throws std::invalid_argument.
  static Rational parse_decimal(std::string_view text);
  /// Parses "n", "-n" or "n/d".
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return q_; }
  Integer numerator() const { return q_.get_num(); }
  Integer denominator() const { return q_.get_den(); }

  bool is_integer() const { return q_.get_den() == 1; }
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  bool fits_int64() const;
  /// Requires is_integer() && fits_int64().
  std::int64_t to_int64() const;
  double to_double() const { return q_.get_d(); }

  Rational abs() const { return Rational(mpq_class(::abs(q_))); }
  Integer floor() const;
  Integer ceil() const;

  /// "n" or "n/d".
  std::string to_string() const;
  /// Exact plain decimal ("0.125", "-3", "2.5") when the value has a
  /// terminating expansion using at most max_digits significant digits.
  std::optional<std::string> to_exact_decimal(int max_digits = 1000) const;
  /// Decimal approximation with the given number of significant digits.
  std::string to_approx_decimal(int significant_digits) const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  /// Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Number of decimal digits in |v| (1 for zero).
int decimal_digits(const Integer& v);

}  // namespace zb

template <>
struct std::hash<zb::Rational> {
  std::size_t operator()(const zb::Rational& r) const noexcept { return r.hash(); }
};
