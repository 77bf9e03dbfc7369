#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hvol/error.hpp"

namespace hvol {

using Integer = boost::multiprecision::cpp_int;
/// Arbitrary-precision rational, always kept reduced with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
/// Exact vector; its length is the ambient dimension of whatever it lives in.
using RVector = std::vector<Rational>;

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact binary value of a finite double.
inline Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::kDomainError, "non-finite value cannot be made exact");
  return Rational(x);
}

/// "p/q", or "p" for integers.
inline std::string to_string(const Rational& q) { return q.str(); }

inline Rational pow(const Rational& base, int e) {
  Rational out = 1;
  Rational b = e >= 0 ? base : Rational(1) / base;
  for (int i = 0; i < std::abs(e); ++i) out *= b;
  return out;
}

/// Accepts "p", "p/q", and decimals such as "-1.25" or "2.5e-3"; all parsed exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw Error(ErrorCode::kSchemaError, "empty rational literal");
  auto bad = [&] { return Error(ErrorCode::kSchemaError, "malformed rational literal '" + s + "'"); };
  auto parse_int = [&](const std::string& t) -> Integer {
    if (t.empty() || t == "-" || t == "+") throw bad();
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    for (std::size_t j = i; j < t.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(t[j]))) throw bad();
    Integer v(t.substr(i));
    return t[0] == '-' ? Integer(-v) : v;
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer p = parse_int(s.substr(0, slash));
    Integer q = parse_int(s.substr(slash + 1));
    if (q == 0) throw Error(ErrorCode::kSchemaError, "zero denominator in '" + s + "'");
    return Rational(p, q);
  }
  std::string mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    try {
      exponent = std::stol(s.substr(e + 1));
    } catch (const std::exception&) {
      throw bad();
    }
  }
  bool negative = !mantissa.empty() && mantissa[0] == '-';
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) mantissa.erase(0, 1);
  std::string digits = mantissa;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
  }
  if (digits.empty()) throw bad();
  Rational value(parse_int(digits));
  value *= pow(Rational(10), static_cast<int>(exponent));
  return negative ? Rational(-value) : value;
}

inline RVector parse_rvector(std::string_view text) {
  RVector out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw Error(ErrorCode::kSchemaError, "empty vector literal");
  return out;
}

inline std::string to_string(const RVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

inline void require_same_dim(const RVector& a, const RVector& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kDomainError, "dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                             std::to_string(b.size()));
}

inline Rational dot(const RVector& a, const RVector& b) {
  require_same_dim(a, b);
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RVector operator+(const RVector& a, const RVector& b) {
  require_same_dim(a, b);
  RVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline RVector operator-(const RVector& a, const RVector& b) {
  require_same_dim(a, b);
  RVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline RVector operator*(const Rational& s, const RVector& v) {
  RVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

inline Rational sum(const RVector& v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

inline bool is_zero(const RVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline std::vector<double> to_doubles(const RVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

inline RVector from_doubles(const std::vector<double>& v) {
  RVector out;
  out.reserve(v.size());
  for (double x : v) out.push_back(from_double(x));
  return out;
}

inline Integer lcm_of_denominators(const RVector& v) {
  Integer l = 1;
  for (const auto& x : v) l = boost::multiprecision::lcm(l, den(x));
  return l;
}

/// Positive rescaling of a nonzero vector to a primitive integer vector.
inline std::vector<Integer> primitive_integer(const RVector& v) {
  if (is_zero(v)) throw Error(ErrorCode::kDomainError, "zero vector has no primitive representative");
  Integer l = lcm_of_denominators(v);
  std::vector<Integer> out;
  Integer g = 0;
  for (const auto& x : v) {
    Integer c = num(x) * (l / den(x));
    out.push_back(c);
    g = boost::multiprecision::gcd(g, c);
  }
  g = boost::multiprecision::abs(g);
  for (auto& c : out) c /= g;
  return out;
}

inline RVector primitive(const RVector& v) {
  RVector out;
  for (const auto& c : primitive_integer(v)) out.emplace_back(c);
  return out;
}

inline bool is_integral(const Rational& q) { return den(q) == 1; }

inline std::int64_t to_int64(const Integer& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorCode::kBudgetExceeded, "integer does not fit in 64 bits");
  return z.convert_to<std::int64_t>();
}

/// First continued-fraction convergent within `tol` of x whose denominator is at most
/// `max_den`; nullopt when no such convergent exists.
inline std::optional<Rational> snap_rational(double x, double tol, std::int64_t max_den = 1000000) {
  if (!std::isfinite(x)) return std::nullopt;
  const Rational target = from_double(x);
  Integer h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  Rational rest = target;
  for (int iter = 0; iter < 64; ++iter) {
    Integer a = num(rest) / den(rest);
    if (num(rest) < 0 && num(rest) % den(rest) != 0) a -= 1;  // floor for negatives
    Integer h = a * h_prev + h_prev2;
    Integer k = a * k_prev + k_prev2;
    if (k > max_den) return std::nullopt;
    Rational approx(h, k);
    if (std::abs(to_double(approx - target)) <= tol) return approx;
    Rational frac = rest - Rational(a);
    if (frac == 0) return approx;
    rest = Rational(1) / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

}  // namespace hvol
