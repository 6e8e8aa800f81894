#pragma once

#include <boost/rational.hpp>

#include <stdexcept>
#include <string>

namespace spacefn {

using Rat = boost::rational<long long>;

inline Rat parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(std::stoll(s), 1);
  long long num = std::stoll(s.substr(0, slash));
  long long den = std::stoll(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rat(num, den);
}

inline std::string format_rational(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace spacefn
