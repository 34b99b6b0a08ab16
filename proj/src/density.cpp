#include "covcode/density.hpp"

#include <stdexcept>

namespace covcode {

BigInt binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r *= BigInt(n - k + i);
    r /= BigInt(i);
  }
  return r;
}

BigInt ball_volume(uint64_t rho, uint64_t n) {
  if (rho > n) throw std::invalid_argument("ball_volume: rho > n");
  BigInt v = 0;
  for (uint64_t i = 0; i <= rho; ++i) v += binomial(n, i);
  return v;
}

std::string render_ratio(const BigInt& num, uint32_t r, int digits) {
  BigInt den = BigInt(1) << r;
  if (num % den == 0) return BigInt(num / den).str();
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = num * scale;
  BigInt q = scaled / den;
  BigInt rem = scaled % den;
  if (rem * 2 >= den) ++q;  // half-up
  std::string s = q.str();
  if (int(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return s;
}

Density density(uint64_t n, uint32_t r, uint32_t R) {
  if (n == 0 || r == 0) throw std::invalid_argument("density: n, r >= 1");
  Density d;
  d.numerator = ball_volume(R > n ? n : R, n);
  d.r = r;
  d.rendered = render_ratio(d.numerator, r);
  return d;
}

}  // namespace covcode
