#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace lgk {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "p", "-p" or "p/q".
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return static_cast<double>(r); }

// binom(n, k) as an exact integer; zero outside 0 <= k <= n.
BigInt binomial(long n, long k);

}  // namespace lgk
