#include "zinc_bridge/rational.hpp"

#include <cctype>
#include <climits>
#include <stdexcept>

namespace zb {

namespace {

Integer pow10(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational::Rational(std::int64_t v) {
  // mpq_class has no int64 constructor on every platform; go through strings
  // only for the values that do not fit a long.
  if (v >= LONG_MIN && v <= LONG_MAX) {
    q_ = static_cast<long>(v);
  } else {
    q_ = mpq_class(std::to_string(v));
  }
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Rational Rational::parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_neg = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_neg = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6)
      throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_text));
    if (exp_neg) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) return Rational(Integer(mantissa * pow10(static_cast<unsigned long>(exponent))));
  return Rational(mantissa, pow10(static_cast<unsigned long>(-exponent)));
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  std::string num(text.substr(0, slash));
  std::string den(text.substr(slash + 1));
  std::string_view num_digits = num;
  if (!num_digits.empty() && num_digits.front() == '-') num_digits.remove_prefix(1);
  if (!all_digits(num_digits) || !all_digits(den))
    throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
  return Rational(Integer(num, 10), Integer(den, 10));
}

bool Rational::fits_int64() const {
  if (!is_integer()) return false;
  static const Integer lo("-9223372036854775808", 10);
  static const Integer hi("9223372036854775807", 10);
  const Integer& n = q_.get_num();
  return n >= lo && n <= hi;
}

std::int64_t Rational::to_int64() const {
  if (!fits_int64()) throw std::range_error("rational " + to_string() + " is not a 64-bit integer");
  const Integer& n = q_.get_num();
  if (n.fits_slong_p()) return n.get_si();
  return std::stoll(n.get_str());
}

Integer Rational::floor() const {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Integer Rational::ceil() const {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

std::string Rational::to_string() const { return q_.get_str(10); }

std::optional<std::string> Rational::to_exact_decimal(int max_digits) const {
  // Terminating iff the reduced denominator is 2^a * 5^b.
  Integer den = q_.get_den();
  unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), Integer(2).get_mpz_t());
  unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), Integer(5).get_mpz_t());
  if (den != 1) return std::nullopt;
  const unsigned long scale = std::max(twos, fives);
  Integer scaled = q_.get_num() * pow10(scale) / q_.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (digits.size() <= scale) digits = std::string(scale - digits.size() + 1, '0') + digits;
  std::string int_part = digits.substr(0, digits.size() - scale);
  std::string frac_part = digits.substr(digits.size() - scale);
  // Significant digits: strip leading zeros of the whole digit string.
  std::string all = int_part + frac_part;
  auto first = all.find_first_not_of('0');
  const int significant = first == std::string::npos ? 1 : static_cast<int>(all.size() - first);
  if (significant > max_digits) return std::nullopt;
  std::string out = negative ? "-" : "";
  out += int_part;
  if (!frac_part.empty()) out += "." + frac_part;
  return out;
}

std::string Rational::to_approx_decimal(int significant_digits) const {
  if (auto exact = to_exact_decimal(significant_digits)) return *exact;
  // Scale so that the integer part carries the requested digits.
  const Rational a = abs();
  int magnitude = decimal_digits(a.floor());
  if (a < Rational(1)) {
    // Count leading fractional zeros.
    magnitude = 0;
    Rational t = a;
    while (t < Rational(1) && !t.is_zero()) {
      t *= Rational(10);
      --magnitude;
    }
    ++magnitude;
  }
  const long frac_digits = std::max<long>(0, significant_digits - magnitude);
  Rational scaled = a * Rational(pow10(static_cast<unsigned long>(frac_digits)));
  // Round half up.
  Integer rounded = (scaled + Rational(Integer(1), Integer(2))).floor();
  std::string digits = rounded.get_str();
  if (static_cast<long>(digits.size()) <= frac_digits)
    digits = std::string(static_cast<std::size_t>(frac_digits) - digits.size() + 1, '0') + digits;
  std::string out = sign() < 0 ? "-" : "";
  out += digits.substr(0, digits.size() - static_cast<std::size_t>(frac_digits));
  if (frac_digits > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(frac_digits));
  return out;
}

Rational& Rational::operator+=(const Rational& o) {
  q_ += o.q_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  q_ -= o.q_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  q_ *= o.q_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

std::size_t Rational::hash() const {
  std::size_t h = 0;
  auto mix = [&h](const Integer& v) {
    const std::size_t limbs = mpz_size(v.get_mpz_t());
    for (std::size_t i = 0; i < limbs; ++i)
      h = h * 1000003u ^ static_cast<std::size_t>(mpz_getlimbn(v.get_mpz_t(), static_cast<mp_size_t>(i)));
    h = h * 31u + static_cast<std::size_t>(mpz_sgn(v.get_mpz_t()) + 1);
  };
  mix(q_.get_num());
  mix(q_.get_den());
  return h;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

int decimal_digits(const Integer& v) {
  if (v == 0) return 1;
  Integer a = ::abs(v);
  return static_cast<int>(a.get_str().size());
}

}  // namespace zb
