#include "citorch/rational.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace citorch {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

__int128 floor_div(__int128 n, __int128 d) {
  __int128 q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

std::string i128_to_string(__int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string out;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    if (digit < 0) digit = -digit;
    out.insert(out.begin(), static_cast<char>('0' + digit));
    v /= 10;
  }
  if (neg) out.insert(out.begin(), '-');
  return out;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

std::int64_t Rational::floor() const { return static_cast<std::int64_t>(floor_div(num_, den_)); }

std::int64_t Rational::ceil() const {
  return -static_cast<std::int64_t>(floor_div(-static_cast<__int128>(num_), den_));
}

std::string Rational::to_fixed(int decimals) const {
  __int128 scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const __int128 scaled = static_cast<__int128>(num_) * scale;
  __int128 q = floor_div(scaled, den_);
  const __int128 rem = scaled - q * den_;  // 0 <= rem < den
  const __int128 twice = 2 * rem;
  if (twice > den_ || (twice == den_ && (q % 2 != 0))) ++q;

  const bool neg = q < 0;
  std::string digits = i128_to_string(neg ? -q : q);
  if (decimals > 0) {
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
      digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  }
  return neg ? "-" + digits : digits;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text, text));
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 17) throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
  const bool neg = !whole.empty() && whole.front() == '-';
  if (neg || (!whole.empty() && whole.front() == '+')) whole.remove_prefix(1);
  const std::int64_t int_part = whole.empty() ? 0 : parse_int(whole, text);
  const std::int64_t frac_part = parse_int(frac, text);
  if (frac_part < 0) throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const __int128 n = static_cast<__int128>(int_part) * scale + frac_part;
  return from_wide(neg ? -n : n, scale);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

}  // namespace citorch
