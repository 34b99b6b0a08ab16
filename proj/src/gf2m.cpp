#include "covcode/gf2m.hpp"

#include <bit>
#include <mutex>
#include <stdexcept>
#include <string>

namespace covcode {

namespace {

int poly_degree(uint64_t p) { return p ? 63 - std::countl_zero(p) : -1; }

// Remainder of carry-less division a mod b.
uint64_t poly_mod(uint64_t a, uint64_t b) {
  int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a)) {
    a ^= b << (da - db);
  }
  return a;
}

}  // namespace

bool FieldContext::is_irreducible(uint32_t poly, int degree) {
  if (poly_degree(poly) != degree) return false;
  if (degree == 1) return true;
  // Trial division against all polynomials of degree 1..degree/2; a proper
  // factorization always contains a factor in that range.
  for (int d = 1; d <= degree / 2; ++d) {
    for (uint32_t q = 1u << d; q < (2u << d); ++q) {
      if (poly_mod(poly, q) == 0) return false;
    }
  }
  return true;
}

uint32_t FieldContext::default_poly(int m) {
  static std::mutex mu;
  static uint32_t cache[kMaxM + 1] = {0};
  if (m < 1 || m > kMaxM) throw std::invalid_argument("gf2m: m out of range");
  std::lock_guard<std::mutex> lk(mu);
  if (cache[m]) return cache[m];
  uint32_t best = 0;
  int best_weight = 0;
  for (uint32_t p = 1u << m; p < (2u << m); ++p) {
    int w = std::popcount(p);
    if (best && w >= best_weight) continue;  // candidates scanned ascending
    if (is_irreducible(p, m)) {
      best = p;
      best_weight = w;
    }
  }
  cache[m] = best;
  return best;
}

FieldContext::FieldContext(int m) : FieldContext(m, default_poly(m)) {}

FieldContext::FieldContext(int m, uint32_t reduction_poly)
    : m_(m), poly_(reduction_poly) {
  if (m < 1 || m > kMaxM) throw std::invalid_argument("gf2m: m out of range");
  if (!is_irreducible(reduction_poly, m)) {
    throw std::invalid_argument("gf2m: reduction polynomial 0x" +
                                std::to_string(reduction_poly) +
                                " is not irreducible of degree " +
                                std::to_string(m));
  }
}

uint32_t FieldContext::mul(uint32_t a, uint32_t b) const {
  uint32_t acc = 0;
  while (b) {
    if (b & 1u) acc ^= a;
    b >>= 1;
    a <<= 1;
    if (a & (1u << m_)) a ^= poly_;
  }
  return acc;
}

uint32_t FieldContext::pow(uint32_t a, uint64_t k) const {
  uint32_t r = 1;
  uint32_t base = a;
  while (k) {
    if (k & 1) r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

uint32_t FieldContext::inv(uint32_t a) const {
  if (a == 0) throw std::domain_error("gf2m: inverse of zero");
  return pow(a, (uint64_t(1) << m_) - 2);
}

uint32_t FieldContext::sqrt(uint32_t a) const {
  return pow(a, uint64_t(1) << (m_ - 1));
}

std::vector<uint32_t> FieldContext::enumerate() const {
  std::vector<uint32_t> xs(order());
  for (uint32_t i = 0; i < order(); ++i) xs[i] = i;
  return xs;
}

FieldElem::FieldElem(uint32_t v, const FieldContext& c) : value(v), ctx(&c) {
  if (v >= c.order()) throw std::invalid_argument("gf2m: value >= 2^m");
}

namespace {
const FieldContext& same_ctx(const FieldElem& a, const FieldElem& b) {
  if (!a.ctx || a.ctx != b.ctx)
    throw std::invalid_argument("gf2m: context mismatch");
  return *a.ctx;
}
}  // namespace

FieldElem FieldElem::operator+(const FieldElem& o) const {
  const FieldContext& c = same_ctx(*this, o);
  return FieldElem(c.add(value, o.value), c);
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
  const FieldContext& c = same_ctx(*this, o);
  return FieldElem(c.mul(value, o.value), c);
}

FieldElem FieldElem::pow(uint64_t k) const {
  return FieldElem(ctx->pow(value, k), *ctx);
}

FieldElem FieldElem::inv() const { return FieldElem(ctx->inv(value), *ctx); }

}  // namespace covcode
