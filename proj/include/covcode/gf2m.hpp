#pragma once

#include <cstdint>
#include <vector>

namespace covcode {

// Arithmetic in GF(2^m) in polynomial basis, 1 <= m <= 16.
// Elements are m-bit integers. The reduction polynomial is an (m+1)-bit
// integer with bit m set; it must be irreducible over GF(2).
class FieldContext {
 public:
  static constexpr int kMaxM = 16;

  // Uses the default reduction polynomial for m (lowest weight,
  // lexicographically least among the irreducibles of degree m).
  explicit FieldContext(int m);
  FieldContext(int m, uint32_t reduction_poly);

  int m() const { return m_; }
  uint32_t order() const { return 1u << m_; }
  uint32_t reduction_poly() const { return poly_; }

  uint32_t add(uint32_t a, uint32_t b) const { return a ^ b; }

  // Carry-less product reduced modulo the reduction polynomial.
  uint32_t mul(uint32_t a, uint32_t b) const;

  // a^k by square-and-multiply; 0^0 == 1 by convention (the A-block row
  // pattern beta^0 xi, beta^1 xi, ... stays uniform for beta = 0).
  uint32_t pow(uint32_t a, uint64_t k) const;

  uint32_t inv(uint32_t a) const;  // a != 0
  uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

  // Squaring is a bijection in characteristic 2, so every element has a
  // unique square root: a^(2^(m-1)).
  uint32_t sqrt(uint32_t a) const;

  // All 2^m elements, 0 first, then ascending values.
  std::vector<uint32_t> enumerate() const;

  static uint32_t default_poly(int m);
  static bool is_irreducible(uint32_t poly, int degree);

 private:
  int m_;
  uint32_t poly_;
};

// Element bound to its context; checked arithmetic for the API surface.
// Hot paths use FieldContext with raw values directly.
struct FieldElem {
  uint32_t value = 0;
  const FieldContext* ctx = nullptr;

  FieldElem() = default;
  FieldElem(uint32_t v, const FieldContext& c);

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem pow(uint64_t k) const;
  FieldElem inv() const;
  bool operator==(const FieldElem& o) const { return value == o.value; }
};

}  // namespace covcode
