#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace covcode {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(uint64_t n, uint64_t k);

// V_{rho,n,2} = sum_{i<=rho} C(n,i), exact.
BigInt ball_volume(uint64_t rho, uint64_t n);

// Covering density mu = 2^-r * sum_{i<=R} C(n,i) as the exact rational
// numerator/2^r plus the 5-decimal half-up rendering used by the tables
// (exact integers render without a decimal point).
struct Density {
  BigInt numerator;   // ball volume
  uint32_t r;         // denominator is 2^r
  std::string rendered;

  bool at_least_one() const { return numerator >= (BigInt(1) << r); }
};

Density density(uint64_t n, uint32_t r, uint32_t R);

// Half-up rendering of num/2^r with `digits` decimals.
std::string render_ratio(const BigInt& num, uint32_t r, int digits = 5);

}  // namespace covcode
