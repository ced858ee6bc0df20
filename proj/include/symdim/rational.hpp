#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symdim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long p, long long q = 1) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  return Rational(BigInt(p), BigInt(q));
}

inline std::string to_string(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Accepts "p", "p/q", "-p/q". Anything else is rejected, including decimals.
inline std::optional<Rational> parse_rational(std::string_view s) {
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string_view ps = s.substr(0, slash);
  if (!is_int(ps)) return std::nullopt;
  BigInt p(std::string(ps[0] == '+' ? ps.substr(1) : ps));
  BigInt q = 1;
  if (slash != std::string_view::npos) {
    std::string_view qs = s.substr(slash + 1);
    if (!is_int(qs) || qs[0] == '-' || qs[0] == '+') return std::nullopt;
    q = BigInt(std::string(qs));
    if (q == 0) return std::nullopt;
  }
  return Rational(p, q);
}

inline BigInt ceil_rational(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (q * den != num && num > 0) q += 1;
  return q;
}

inline Rational abs_rational(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace symdim
