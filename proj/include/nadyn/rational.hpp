#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace nadyn {

/// Exact length/mass value. All metric and measure comparisons go through this.
using Rational = boost::rational<std::int64_t>;
using Length = Rational;
using Mass = Rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace detail {

inline std::int64_t parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error("malformed rational '" + std::string(whole) + "'");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw Error("malformed rational '" + std::string(whole) + "'");
  std::int64_t v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw Error("malformed rational '" + std::string(whole) + "'");
    if (v > (INT64_MAX - (s[i] - '0')) / 10) throw Error("rational out of range '" + std::string(whole) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parses "a/b", "a" or a finite decimal such as "1.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const auto s = detail::trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = detail::parse_integer(detail::trim(s.substr(0, slash)), text);
    const auto den = detail::parse_integer(detail::trim(s.substr(slash + 1)), text);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto int_part = s.substr(0, dot);
    auto frac_part = s.substr(dot + 1);
    if (frac_part.size() > 15) throw Error("too many decimal digits in '" + std::string(text) + "'");
    bool neg = !int_part.empty() && int_part[0] == '-';
    if (!int_part.empty() && (int_part[0] == '-' || int_part[0] == '+')) int_part.remove_prefix(1);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : detail::parse_integer(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : detail::parse_integer(frac_part, text);
    if (frac < 0) throw Error("malformed rational '" + std::string(text) + "'");
    Rational r = Rational(whole) + Rational(frac, scale);
    return neg ? -r : r;
  }
  return Rational(detail::parse_integer(s, text));
}

/// floor(r * den) for a positive integer scale.
inline std::int64_t floor_scaled(const Rational& r, std::int64_t den) {
  const __int128 p = static_cast<__int128>(r.numerator()) * den;
  const __int128 q = r.denominator();
  __int128 f = p / q;
  if ((p % q != 0) && ((p < 0) != (q < 0))) --f;
  return static_cast<std::int64_t>(f);
}

/// ceil(r * den) for a positive integer scale.
inline std::int64_t ceil_scaled(const Rational& r, std::int64_t den) {
  const __int128 p = static_cast<__int128>(r.numerator()) * den;
  const __int128 q = r.denominator();
  __int128 f = p / q;
  if ((p % q != 0) && ((p < 0) == (q < 0))) ++f;
  return static_cast<std::int64_t>(f);
}

}  // namespace nadyn
