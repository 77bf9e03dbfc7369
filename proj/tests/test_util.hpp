#pragma once

#include <initializer_list>
#include <string>
#include <variant>

#include "hvol/rational.hpp"

namespace hvol::test {

inline Rational Q(const std::string& s) { return parse_rational(s); }

/// Mixed int / Rational vector literal.
inline RVector V(std::initializer_list<std::variant<int, Rational>> xs) {
  RVector out;
  for (const auto& x : xs) out.push_back(std::holds_alternative<int>(x) ? Rational(std::get<int>(x)) : std::get<Rational>(x));
  return out;
}

}  // namespace hvol::test
