#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "covcode/construct.hpp"

namespace covcode {

namespace {

// Deterministic per-trial syndrome stream (thread-count independent).
uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed records (and imports) decode through a precomputed table: first
// representation found over layers ell..R of subset-distinct combinations.
class TableDecoder : public RecordDecoder {
 public:
  TableDecoder(const CodeRecord& rec, const PartitionClaim& pc) {
    R = pc.R;
    ell = pc.ell;
    uint32_t r = rec.r();
    if (r > 22)
      throw std::runtime_error(rec.name +
                               ": table decoder capped at r <= 22; larger "
                               "records need construction provenance");
    cols_ = materialize_u64(*rec.H);
    auto sub = pc.subset_map(rec.n());
    uint64_t space = uint64_t(1) << r;
    table_.assign(space, Entry{});
    uint64_t remaining = space;
    if (ell == 0) {
      table_[0].found = 1;
      --remaining;
    }
    const uint32_t n = uint32_t(cols_.size());
    auto put = [&](uint64_t s, uint32_t a, uint32_t b, uint32_t c, uint32_t d,
                   uint8_t count) {
      Entry& e = table_[s];
      if (e.found) return;
      e.found = 1;
      e.count = count;
      e.idx[0] = a; e.idx[1] = b; e.idx[2] = c; e.idx[3] = d;
      --remaining;
    };
    for (int layer = std::max(1, ell); layer <= R && remaining; ++layer) {
      switch (layer) {
        case 1:
          for (uint32_t a = 0; a < n; ++a) put(cols_[a], a, 0, 0, 0, 1);
          break;
        case 2:
          for (uint32_t a = 0; a < n; ++a)
            for (uint32_t b = a + 1; b < n; ++b) {
              if (sub[a] == sub[b]) continue;
              put(cols_[a] ^ cols_[b], a, b, 0, 0, 2);
            }
          break;
        case 3:
          for (uint32_t a = 0; a < n; ++a)
            for (uint32_t b = a + 1; b < n; ++b) {
              if (sub[a] == sub[b]) continue;
              uint64_t sab = cols_[a] ^ cols_[b];
              for (uint32_t c = b + 1; c < n; ++c) {
                if (sub[c] == sub[a] || sub[c] == sub[b]) continue;
                put(sab ^ cols_[c], a, b, c, 0, 3);
              }
            }
          break;
        case 4:
          for (uint32_t a = 0; a < n; ++a)
            for (uint32_t b = a + 1; b < n; ++b) {
              if (sub[a] == sub[b]) continue;
              uint64_t sab = cols_[a] ^ cols_[b];
              for (uint32_t c = b + 1; c < n; ++c) {
                if (sub[c] == sub[a] || sub[c] == sub[b]) continue;
                uint64_t sabc = sab ^ cols_[c];
                for (uint32_t d = c + 1; d < n; ++d) {
                  if (sub[d] == sub[a] || sub[d] == sub[b] || sub[d] == sub[c])
                    continue;
                  put(sabc ^ cols_[d], a, b, c, d, 4);
                }
              }
            }
          break;
      }
    }
    if (remaining)
      throw std::runtime_error(rec.name + "/" + pc.name +
                               ": table decoder found uncovered syndromes; "
                               "partition claim is invalid");
  }

  Rep decode(uint64_t syndrome, std::string* trace) const override {
    const Entry& e = table_[syndrome];
    Rep rep;
    for (int i = 0; i < e.count; ++i) rep.add(e.idx[i]);
    if (trace) *trace = "table";
    return rep;
  }

 private:
  struct Entry {
    uint8_t found = 0;
    uint8_t count = 0;
    uint32_t idx[4] = {0, 0, 0, 0};
  };
  std::vector<uint64_t> cols_;
  std::vector<Entry> table_;
};

// Replays the construction's covering-radius proof case by case.
class QmDecoder : public RecordDecoder {
 public:
  QmDecoder(Workspace& ws, const CodeRecord& rec)
      : field_(1) /* replaced below */ {
    if (rec.r() > 64)
      throw std::runtime_error(rec.name + ": decoding is limited to r <= 64");
    spec_ = ConstructionSpec::from_json(rec.provenance.at("construction"));
    v_ = spec_.variant;
    Rv_ = variant_radius(v_);
    m_ = uint32_t(spec_.m);
    q_ = 1u << m_;
    field_ = FieldContext(spec_.m,
                          rec.provenance.at("field_poly").get<uint32_t>());
    nm_ = rec.provenance.at("Nm").get<uint64_t>();
    r0_ = rec.provenance.at("r0").get<uint32_t>();
    dkind_ = variant_dkind(v_);

    auto start = ws.get(spec_.start);
    n0_ = start->n();
    start_dec_ = ws.decoder(spec_.start, spec_.start_partition);
    if (!spec_.inner.empty()) {
      inner_dec_ = ws.decoder(spec_.inner, spec_.inner_partition);
      n2m_ = ws.get(spec_.inner)->n();
    }

    const PartitionClaim* p0c = start->find_partition(spec_.start_partition);
    Partition p0 = p0c->explicit_partition
                       ? *p0c->explicit_partition
                       : p0c->rule->materialize(n0_);
    ind_ = assign_indicators(v_, p0, *start, spec_.m);

    if (v_ == Variant::QM5_2) {
      star_col_ = start->zero_triple.at(0);
      star_pair_[0] = start->zero_triple.at(1);
      star_pair_[1] = start->zero_triple.at(2);
    }

    R = Rv_;
    ell = rec.claimed_ell;
    if (ell >= 1) {
      if (!rec.zero_triple.empty()) {
        for (uint32_t c : rec.zero_triple) zero_rep_.add(c);
      } else {
        Rep s0 = start_dec_->decode(0, nullptr);
        for (int i = 0; i < s0.count; ++i) zero_rep_.add(acol(s0.idx[i], 0));
      }
    }
    if (v_ == Variant::QM1_4 && ell >= 3) xi_color_ = rainbow_coloring(q_);
  }

  Rep decode(uint64_t syndrome, std::string* trace) const override {
    if (syndrome == 0) {
      if (trace) *trace = "zero";
      return ell >= 1 ? zero_rep_ : Rep{};
    }
    uint64_t pi = syndrome & ((r0_ == 64) ? ~uint64_t(0)
                                          : ((uint64_t(1) << r0_) - 1));
    uint32_t u[5] = {0, 0, 0, 0, 0};
    for (int d = 1; d <= Rv_; ++d)
      u[d] = uint32_t((syndrome >> (r0_ + uint32_t(d - 1) * m_)) & (q_ - 1));

    Rep srep = start_dec_->decode(pi, nullptr);
    // QM5^2: a bare starred column rewrites through its dependent pair
    if (v_ == Variant::QM5_2 && srep.count == 1 &&
        beta(srep.idx[0]) == kStar) {
      Rep r2;
      r2.add(star_pair_[0]);
      r2.add(star_pair_[1]);
      srep = r2;
      if (trace) *trace += "star-rewrite;";
    }
    // keep the starred column (at most one) last
    for (int i = 0; i + 1 < srep.count; ++i)
      if (beta(srep.idx[i]) == kStar)
        std::swap(srep.idx[i], srep.idx[srep.count - 1]);

    switch (Rv_) {
      case 2: return decode_r2(srep, u, trace);
      case 3: return decode_r3(srep, u, trace);
      default: return decode_r4(srep, u, trace);
    }
  }

  static std::vector<uint8_t> rainbow_coloring(uint32_t q);

 private:
  int32_t beta(uint64_t start_col) const {
    return ind_.per_column[size_t(start_col)];
  }
  uint64_t acol(uint64_t j, uint32_t xi) const {
    return nm_ + (j << m_) + xi;
  }
  // D tail column indices (values v are nonzero m-bit words)
  uint64_t d1(uint32_t v) const { return v - 1; }          // also D3
  uint64_t d2_left(uint32_t v) const { return v - 1; }
  uint64_t d2_right(uint32_t v) const { return (q_ - 1) + v - 1; }
  uint64_t d4_w(uint32_t v) const { return v - 1; }
  uint64_t d4_hc(uint64_t i) const { return (q_ - 1) + i; }
  uint64_t d5_hc(uint64_t i) const { return i; }
  uint64_t d5_w(uint32_t v) const { return n2m_ + v - 1; }
  uint64_t d6_left(uint32_t v) const { return v - 1; }     // v in 1..q-2
  uint64_t d6_mid() const { return q_ - 2; }
  uint64_t d6_right(uint32_t v) const { return (q_ - 1) + v - 1; }

  uint32_t mul(int32_t a, uint32_t b) const { return field_.mul(uint32_t(a), b); }
  uint32_t powi(int32_t a, int k) const { return field_.pow(uint32_t(a), k); }

  // x,y solving x*b1^{da-1} + y*b2^{da-1} = ta, same for db; b1 != b2 and
  // the chosen rows keep the 2x2 system nonsingular in every caller.
  void solve2(int32_t b1, int32_t b2, int da, int db, uint32_t ta, uint32_t tb,
              uint32_t& x, uint32_t& y) const {
    uint32_t p1a = powi(b1, da - 1), p2a = powi(b2, da - 1);
    uint32_t p1b = powi(b1, db - 1), p2b = powi(b2, db - 1);
    uint32_t det = field_.add(field_.mul(p1a, p2b), field_.mul(p1b, p2a));
    uint32_t dinv = field_.inv(det);
    x = field_.mul(dinv, field_.add(field_.mul(ta, p2b), field_.mul(tb, p2a)));
    y = field_.mul(dinv, field_.add(field_.mul(ta, p1b), field_.mul(tb, p1a)));
  }

  // Vandermonde system over rows delta = 1..v (Gaussian elimination).
  void solveN(const int32_t* bs, int v, const uint32_t* targets,
              uint32_t* xs) const {
    uint32_t a[4][5];
    for (int r = 0; r < v; ++r) {
      for (int c = 0; c < v; ++c) a[r][c] = powi(bs[c], r);
      a[r][v] = targets[r];
    }
    for (int c = 0; c < v; ++c) {
      int piv = c;
      while (piv < v && a[piv][c] == 0) ++piv;
      if (piv == v) throw std::logic_error("singular decoder system");
      if (piv != c)
        for (int k = 0; k <= v; ++k) std::swap(a[c][k], a[piv][k]);
      uint32_t inv = field_.inv(a[c][c]);
      for (int k = c; k <= v; ++k) a[c][k] = field_.mul(a[c][k], inv);
      for (int r = 0; r < v; ++r) {
        if (r == c || a[r][c] == 0) continue;
        uint32_t f = a[r][c];
        for (int k = c; k <= v; ++k)
          a[r][k] = field_.add(a[r][k], field_.mul(f, a[c][k]));
      }
    }
    for (int c = 0; c < v; ++c) xs[c] = a[c][v];
  }

  Rep inner_mapped(uint32_t e_lo, uint32_t e_hi, bool d5) const {
    uint64_t e = uint64_t(e_lo) | (uint64_t(e_hi) << m_);
    Rep in = inner_dec_->decode(e, nullptr);
    Rep out;
    for (int i = 0; i < in.count; ++i)
      out.add(d5 ? d5_hc(in.idx[i]) : d4_hc(in.idx[i]));
    return out;
  }

  Rep decode_r2(const Rep& srep, const uint32_t* u, std::string* trace) const;
  Rep decode_r3(const Rep& srep, const uint32_t* u, std::string* trace) const;
  Rep decode_r4(const Rep& srep, const uint32_t* u, std::string* trace) const;

  ConstructionSpec spec_;
  Variant v_ = Variant::QM2_2;
  int Rv_ = 2;
  uint32_t m_ = 0, q_ = 0, r0_ = 0;
  uint64_t nm_ = 0, n0_ = 0, n2m_ = 0;
  DKind dkind_ = DKind::D1;
  FieldContext field_;
  std::shared_ptr<const RecordDecoder> start_dec_, inner_dec_;
  IndicatorAssignment ind_;
  uint32_t star_col_ = UINT32_MAX;
  uint32_t star_pair_[2] = {0, 0};
  Rep zero_rep_;
  std::vector<uint8_t> xi_color_;
};

std::vector<uint8_t> QmDecoder::rainbow_coloring(uint32_t q) {
  std::vector<uint8_t> color(q);
  for (uint32_t xi = 0; xi < q; ++xi) color[xi] = uint8_t(xi % 3);
  for (uint32_t x = 0; x < q; ++x) {
    bool found = false;
    for (uint32_t a = 0; a < q && !found; ++a) {
      if (color[a] != 0) continue;
      for (uint32_t b = 0; b < q && !found; ++b) {
        if (color[b] != 1) continue;
        uint32_t c = x ^ a ^ b;
        if (color[c] == 2 && c != a && c != b) found = true;
      }
    }
    if (!found)
      throw std::logic_error("rainbow coloring failed at m with q = " +
                             std::to_string(q));
  }
  return color;
}

Rep QmDecoder::decode_r2(const Rep& srep, const uint32_t* u,
                         std::string* trace) const {
  const uint32_t u1 = u[1], u2 = u[2];
  Rep rep;
  if (srep.count == 2) {
    uint64_t i = srep.idx[0], j = srep.idx[1];
    int32_t bi = beta(i), bj = beta(j);
    if (bj == kStar) {
      if (trace) *trace += "(1):star";
      uint32_t xi_star = field_.add(mul(bi, u1), u2);
      rep.add(acol(i, u1));
      rep.add(acol(j, xi_star));
    } else {
      if (trace) *trace += "(1)";
      uint32_t x, y;
      solve2(bi, bj, 1, 2, u1, u2, x, y);
      rep.add(acol(i, x));
      rep.add(acol(j, y));
    }
    return rep;
  }
  if (srep.count == 1) {
    uint64_t j = srep.idx[0];
    int32_t b = beta(j);
    if (b == kStar) {
      // QM1^2 and QM3^2 allow a starred single column
      if (v_ == Variant::QM3_2) {
        uint32_t w = q_ - 1;
        if (trace) *trace += "(2):star";
        if (u1 == w) {
          rep.add(acol(j, u2 ^ w));
          rep.add(d6_mid());
        } else {
          rep.add(acol(j, u2));
          if (u1) rep.add(d6_left(u1));
        }
      } else {  // QM1^2
        if (trace) *trace += "(2):star";
        rep.add(acol(j, u2));
        if (u1) rep.add(d2_left(u1));
      }
      return rep;
    }
    uint32_t e = field_.add(mul(b, u1), u2);
    switch (v_) {
      case Variant::QM1_2:
        if (trace) *trace += "(2)";
        rep.add(acol(j, u1));
        if (e) rep.add(d2_right(e));
        return rep;
      case Variant::QM3_2: {
        uint32_t w = q_ - 1;
        if (e == 0) {
          if (trace) *trace += "(2):exact";
          rep.add(acol(j, u1));
        } else if (e != w) {
          if (trace) *trace += "(2)";
          rep.add(acol(j, u1));
          rep.add(d6_right(e));
        } else if (b != 0) {
          // e = w: shift the block column so the correction lands in the
          // left Hamming tail; b != 1, so b^-1 w != w
          if (trace) *trace += "(2):e=w";
          uint32_t x = field_.div(u2, uint32_t(b));
          rep.add(acol(j, x));
          rep.add(d6_left(x ^ u1));
        } else {  // b = 0 and u2 = w
          if (trace) *trace += "(2):b=0,e=w";
          rep.add(acol(j, u1 ^ w));
          rep.add(d6_mid());
        }
        return rep;
      }
      default:  // D1 tail
        if (trace) *trace += "(2)";
        rep.add(acol(j, u1));
        if (e) rep.add(d1(e));
        return rep;
    }
  }
  // srep.count == 0: pi = 0
  switch (v_) {
    case Variant::QM1_2:
      if (trace) *trace += "(3)";
      if (u1) rep.add(d2_left(u1));
      if (u2) rep.add(d2_right(u2));
      return rep;
    case Variant::QM3_2: {
      uint32_t w = q_ - 1;
      if (trace) *trace += "(3)";
      if (u1 == 0 && u2 == 0) return rep;
      if (u2 == 0) {
        if (u1 != w) {
          rep.add(d6_left(u1));
        } else {
          rep.add(d6_left(1));
          rep.add(d6_left(w ^ 1));
        }
      } else if (u1 == 0) {
        if (u2 != w) {
          rep.add(d6_right(u2));
        } else {
          rep.add(d6_right(1));
          rep.add(d6_right(w ^ 1));
        }
      } else if (u1 == w && u2 == w) {
        rep.add(d6_mid());
      } else if (u1 == w) {
        rep.add(d6_mid());
        rep.add(d6_right(w ^ u2));
      } else if (u2 == w) {
        rep.add(d6_left(u1 ^ w));
        rep.add(d6_mid());
      } else {
        rep.add(d6_left(u1));
        rep.add(d6_right(u2));
      }
      return rep;
    }
    default: {  // D1 tail with a complete indicator set
      if (u1) {
        if (trace) *trace += "(3):pair";
        uint32_t bk = field_.div(u2, u1);
        uint32_t k = ind_.value_rep[bk];
        rep.add(acol(k, 0));
        rep.add(acol(k, u1));
      } else if (u2) {
        if (trace) *trace += "(3):tail";
        rep.add(d1(u2));
      }
      return rep;
    }
  }
}

Rep QmDecoder::decode_r3(const Rep& srep, const uint32_t* u,
                         std::string* trace) const {
  const uint32_t u1 = u[1], u2 = u[2], u3 = u[3];
  const bool d4 = dkind_ == DKind::D4;
  Rep rep;
  if (srep.count == 3) {
    uint64_t i = srep.idx[0], j = srep.idx[1], k = srep.idx[2];
    int32_t bi = beta(i), bj = beta(j), bk = beta(k);
    if (bk == kStar) {
      if (trace) *trace += "(1):star";
      uint32_t x, y;
      solve2(bi, bj, 1, 2, u1, u2, x, y);
      uint32_t xi_star =
          field_.add(u3, field_.add(field_.mul(powi(bi, 2), x),
                                    field_.mul(powi(bj, 2), y)));
      rep.add(acol(i, x));
      rep.add(acol(j, y));
      rep.add(acol(k, xi_star));
    } else {
      if (trace) *trace += "(1)";
      int32_t bs[3] = {bi, bj, bk};
      uint32_t ts[3] = {u1, u2, u3};
      uint32_t xs[3];
      solveN(bs, 3, ts, xs);
      rep.add(acol(i, xs[0]));
      rep.add(acol(j, xs[1]));
      rep.add(acol(k, xs[2]));
    }
    return rep;
  }
  if (srep.count == 2) {
    uint64_t i = srep.idx[0], j = srep.idx[1];
    int32_t bi = beta(i), bj = beta(j);
    if (d4) {
      // indicators are nonzero here, so rows 2,3 stay nonsingular
      if (trace) *trace += "(2)";
      uint32_t x, y;
      solve2(bi, bj, 2, 3, u2, u3, x, y);
      rep.add(acol(i, x));
      rep.add(acol(j, y));
      uint32_t wv = x ^ y ^ u1;
      if (wv) rep.add(d4_w(wv));
      return rep;
    }
    if (v_ == Variant::QM2_3) {
      if (trace) *trace += "(2)";
      uint32_t x, y;
      solve2(bi, bj, 1, 2, u1, u2, x, y);
      rep.add(acol(i, x));
      rep.add(acol(j, y));
      uint32_t e3 = field_.add(u3, field_.add(field_.mul(powi(bi, 2), x),
                                              field_.mul(powi(bj, 2), y)));
      if (e3) rep.add(d2_right(e3));
      return rep;
    }
    // D3 tail (QM3^3 / QM4^3)
    if (bj == kStar) {
      if (trace) *trace += "(2):star";
      uint32_t xi_star = field_.add(u3, field_.mul(powi(bi, 2), u1));
      uint32_t e2 = field_.add(u2, mul(bi, u1));
      rep.add(acol(i, u1));
      rep.add(acol(j, xi_star));
      if (e2) rep.add(d1(e2));
    } else {
      if (trace) *trace += "(2)";
      uint32_t x, y;
      solve2(bi, bj, 1, 3, u1, u3, x, y);
      uint32_t e2 = field_.add(u2, field_.add(mul(bi, x), mul(bj, y)));
      rep.add(acol(i, x));
      rep.add(acol(j, y));
      if (e2) rep.add(d1(e2));
    }
    return rep;
  }
  if (srep.count == 1) {
    uint64_t j = srep.idx[0];
    int32_t b = beta(j);
    if (d4) {
      if (trace) *trace += "(3)";
      uint32_t e2 = field_.add(u2, mul(b, u1));
      uint32_t e3 = field_.add(u3, field_.mul(powi(b, 2), u1));
      rep.add(acol(j, u1));
      if (e2 | e3) {
        Rep in = inner_mapped(e2, e3, false);
        for (int t = 0; t < in.count; ++t) rep.add(in.idx[t]);
      }
      return rep;
    }
    if (v_ == Variant::QM2_3) {
      if (trace) *trace += "(3)";
      uint32_t e2 = field_.add(u2, mul(b, u1));
      uint32_t e3 = field_.add(u3, field_.mul(powi(b, 2), u1));
      rep.add(acol(j, u1));
      if (e2) rep.add(d2_left(e2));
      if (e3) rep.add(d2_right(e3));
      return rep;
    }
    // QM4^3 (complete indicator set with star)
    if (b == kStar) {
      if (u1) {
        if (trace) *trace += "(3):star,pair";
        uint32_t bk = field_.div(u2, u1);
        uint64_t k = ind_.value_rep[bk];
        uint32_t xi_star = field_.add(u3, field_.mul(powi(int32_t(bk), 2), u1));
        rep.add(acol(j, xi_star));
        rep.add(acol(k, 0));
        rep.add(acol(k, u1));
      } else {
        if (trace) *trace += "(3):star,tail";
        rep.add(acol(j, u3));
        if (u2) rep.add(d1(u2));
      }
      return rep;
    }
    uint32_t e2 = field_.add(u2, mul(b, u1));
    uint32_t e3 = field_.add(u3, field_.mul(powi(b, 2), u1));
    if (!e2 && !e3) {
      if (trace) *trace += "(3):exact";
      rep.add(acol(j, u1));
    } else if (e2 && !e3) {
      if (trace) *trace += "(3):tail";
      rep.add(acol(j, u1));
      rep.add(d1(e2));
    } else if (e2 && e3) {
      // pick the block pair whose indicator fixes rows 2 and 3 at once
      if (trace) *trace += "(3):pair";
      uint32_t bk = field_.div(field_.add(u3, mul(b, u2)), e2);
      uint64_t k = ind_.value_rep[bk];
      uint32_t x = field_.div(field_.add(u2, field_.mul(bk, u1)),
                              field_.add(uint32_t(b), bk));
      uint32_t s = u1 ^ x;
      rep.add(acol(j, x));
      rep.add(acol(k, 0));
      rep.add(acol(k, s));
    } else {  // e2 == 0, e3 != 0: a same-block star pair fixes row 3 alone
      if (trace) *trace += "(3):starpair";
      rep.add(acol(j, u1));
      rep.add(acol(ind_.star_rep, 0));
      rep.add(acol(ind_.star_rep, e3));
    }
    return rep;
  }
  // srep.count == 0: pi = 0
  if (d4) {
    if (trace) *trace += "(4)";
    if (u1) rep.add(d4_w(u1));
    if (u2 | u3) {
      Rep in = inner_mapped(u2, u3, false);
      for (int t = 0; t < in.count; ++t) rep.add(in.idx[t]);
    }
    return rep;
  }
  if (v_ == Variant::QM4_3) {
    if (u1) {
      if (trace) *trace += "(4):pair";
      uint32_t bk = field_.sqrt(field_.div(u3, u1));
      uint64_t k = ind_.value_rep[bk];
      uint32_t e2 = field_.add(u2, field_.mul(bk, u1));
      rep.add(acol(k, 0));
      rep.add(acol(k, u1));
      if (e2) rep.add(d1(e2));
    } else if (u3) {
      if (trace) *trace += "(4):starpair";
      rep.add(acol(ind_.star_rep, 0));
      rep.add(acol(ind_.star_rep, u3));
      if (u2) rep.add(d1(u2));
    } else if (u2) {
      if (trace) *trace += "(4):tail";
      rep.add(d1(u2));
    }
    return rep;
  }
  throw std::logic_error(variant_name(v_) +
                         ": starting decoder returned an empty representation");
}

Rep QmDecoder::decode_r4(const Rep& srep, const uint32_t* u,
                         std::string* trace) const {
  const uint32_t u1 = u[1], u2 = u[2], u3 = u[3], u4 = u[4];
  Rep rep;
  if (srep.count == 4 || srep.count == 3) {
    int v = srep.count;
    int32_t bs[4];
    for (int t = 0; t < v; ++t) bs[t] = beta(srep.idx[t]);
    uint32_t ts[4] = {u1, u2, u3, u4};
    uint32_t xs[4];
    solveN(bs, v, ts, xs);
    if (trace) *trace += "(1)";
    uint32_t e4 = u4;
    for (int t = 0; t < v; ++t) {
      rep.add(acol(srep.idx[t], xs[t]));
      e4 = field_.add(e4, field_.mul(powi(bs[t], 3), xs[t]));
    }
    if (v == 3 && e4) {
      switch (dkind_) {
        case DKind::D2: rep.add(d2_right(e4)); break;
        case DKind::D1: rep.add(d1(e4)); break;
        default: rep.add(d5_w(e4)); break;
      }
    }
    return rep;
  }
  if (srep.count == 2) {
    uint64_t i = srep.idx[0], j = srep.idx[1];
    int32_t bi = beta(i), bj = beta(j);
    if (v_ == Variant::QM4_4) {
      // m odd makes cubing injective, so rows 1 and 4 are solvable
      if (trace) *trace += "(2)";
      uint32_t x, y;
      solve2(bi, bj, 1, 4, u1, u4, x, y);
      uint32_t e2 = field_.add(u2, field_.add(mul(bi, x), mul(bj, y)));
      uint32_t e3 =
          field_.add(u3, field_.add(field_.mul(powi(bi, 2), x),
                                    field_.mul(powi(bj, 2), y)));
      rep.add(acol(i, x));
      rep.add(acol(j, y));
      if (e2 | e3) {
        Rep in = inner_mapped(e2, e3, true);
        for (int t = 0; t < in.count; ++t) rep.add(in.idx[t]);
      }
      return rep;
    }
    // QM1^4
    if (trace) *trace += "(2)";
    uint32_t x, y;
    solve2(bi, bj, 1, 2, u1, u2, x, y);
    uint32_t e3 = field_.add(u3, field_.add(field_.mul(powi(bi, 2), x),
                                            field_.mul(powi(bj, 2), y)));
    uint32_t e4 = field_.add(u4, field_.add(field_.mul(powi(bi, 3), x),
                                            field_.mul(powi(bj, 3), y)));
    rep.add(acol(i, x));
    rep.add(acol(j, y));
    if (e3) rep.add(d2_left(e3));
    if (e4) rep.add(d2_right(e4));
    if (ell >= 3 && rep.count == 2) {
      // expand the first block column into a rainbow triple to honor l = 3
      if (trace) *trace += ";expand";
      Rep out;
      uint32_t a = 0, b = 0, c = 0;
      bool found = false;
      for (a = 0; a < q_ && !found; ++a) {
        if (xi_color_[a] != 0) continue;
        for (b = 0; b < q_ && !found; ++b) {
          if (xi_color_[b] != 1) continue;
          c = x ^ a ^ b;
          if (xi_color_[c] == 2) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
      out.add(acol(i, a));
      out.add(acol(i, b));
      out.add(acol(i, c));
      out.add(acol(j, y));
      return out;
    }
    return rep;
  }
  if (srep.count == 1 && v_ == Variant::QM4_4) {
    uint64_t j = srep.idx[0];
    int32_t b = beta(j);
    if (trace) *trace += "(3)";
    uint32_t e2 = field_.add(u2, mul(b, u1));
    uint32_t e3 = field_.add(u3, field_.mul(powi(b, 2), u1));
    uint32_t e4 = field_.add(u4, field_.mul(powi(b, 3), u1));
    rep.add(acol(j, u1));
    if (e2 | e3) {
      Rep in = inner_mapped(e2, e3, true);
      for (int t = 0; t < in.count; ++t) rep.add(in.idx[t]);
    }
    if (e4) rep.add(d5_w(e4));
    return rep;
  }
  throw std::logic_error(variant_name(v_) + ": unsupported case v = " +
                         std::to_string(srep.count));
}

}  // namespace

std::shared_ptr<const RecordDecoder> Workspace::decoder(
    const std::string& rec_name, const std::string& partition) {
  auto rec = get(rec_name);
  std::string pname = partition;
  if (pname.empty()) {
    if (!rec->provenance.contains("construction")) {
      if (rec->partitions.empty())
        throw std::runtime_error(rec_name + ": no partition to decode against");
      pname = rec->partitions.front().name;
    } else {
      pname = "@construction";
    }
  }
  std::string key = rec_name + "/" + pname;
  auto it = decoders_.find(key);
  if (it != decoders_.end()) return it->second;

  std::shared_ptr<const RecordDecoder> dec;
  if (rec->provenance.contains("construction")) {
    dec = std::make_shared<QmDecoder>(*this, *rec);
  } else {
    const PartitionClaim* pc = rec->find_partition(pname);
    if (!pc)
      throw std::runtime_error(rec_name + ": no partition claim named '" +
                               pname + "'");
    dec = std::make_shared<TableDecoder>(*rec, *pc);
  }
  decoders_[key] = dec;
  return dec;
}

Rep decode_syndrome(Workspace& ws, const std::string& rec_name,
                    uint64_t syndrome, std::string* trace) {
  return ws.decoder(rec_name)->decode(syndrome, trace);
}

SampleReport decoder_sample_verify(Workspace& ws, const std::string& rec_name,
                                   uint64_t trials, uint64_t seed,
                                   const std::string& partition, int threads) {
  auto t0 = std::chrono::steady_clock::now();
  auto rec = ws.get(rec_name);
  auto dec = ws.decoder(rec_name);
  if (rec->r() > 64)
    throw std::runtime_error(rec_name + ": sampling needs r <= 64");
  uint64_t mask = rec->r() == 64 ? ~uint64_t(0)
                                 : ((uint64_t(1) << rec->r()) - 1);
  const DerivedPartition* rule = nullptr;
  const PartitionClaim* pc = nullptr;
  std::vector<uint32_t> explicit_map;
  if (!partition.empty()) {
    pc = rec->find_partition(partition);
    if (!pc)
      throw std::runtime_error(rec_name + ": no partition claim named '" +
                               partition + "'");
    if (pc->rule)
      rule = &*pc->rule;
    else
      explicit_map = pc->explicit_partition->subset_map(rec->n());
  }
  const ColumnSource& H = *rec->H;
  int R = rec->claimed_R;

  int nthreads = threads > 0 ? threads : VerifyBudget{}.thread_count();
  std::atomic<uint64_t> bad_trial{~uint64_t(0)};
  auto worker = [&](uint64_t lo, uint64_t hi) {
    for (uint64_t t = lo; t < hi; ++t) {
      if (t % 4096 == 0 && bad_trial.load(std::memory_order_relaxed) != ~uint64_t(0))
        return;
      uint64_t s = splitmix64(seed + t) & mask;
      Rep rep;
      bool ok = true;
      try {
        rep = dec->decode(s, nullptr);
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok) {
        if (rep.count > R) ok = false;
        uint64_t x = 0;
        for (int i = 0; ok && i < rep.count; ++i) {
          if (rep.idx[i] >= H.cols())
            ok = false;
          else
            x ^= H.column_u64(rep.idx[i]) & mask;
        }
        if (ok && x != s) ok = false;
        if (ok && pc) {
          if (rep.count < pc->ell) ok = false;
          uint32_t subs[4];
          for (int i = 0; ok && i < rep.count; ++i) {
            subs[i] = rule ? rule->subset_of(rep.idx[i])
                           : explicit_map[size_t(rep.idx[i])];
            for (int k = 0; k < i; ++k)
              if (subs[k] == subs[i]) ok = false;
          }
        }
      }
      if (!ok) {
        uint64_t prev = bad_trial.load(std::memory_order_relaxed);
        while (t < prev &&
               !bad_trial.compare_exchange_weak(prev, t,
                                                std::memory_order_relaxed)) {
        }
        return;
      }
    }
  };
  if (nthreads <= 1 || trials < 1024) {
    worker(0, trials);
  } else {
    std::vector<std::thread> pool;
    uint64_t per = (trials + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      uint64_t lo = uint64_t(t) * per;
      uint64_t hi = std::min(trials, lo + per);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  SampleReport out;
  out.trials = trials;
  uint64_t bt = bad_trial.load();
  if (bt == ~uint64_t(0)) {
    out.pass = true;
  } else {
    out.pass = false;
    out.failed_trial = bt;
    out.failed_syndrome = splitmix64(seed + bt) & mask;
    std::string tr;
    try {
      Rep rep = dec->decode(out.failed_syndrome, &tr);
      uint64_t x = 0;
      for (int i = 0; i < rep.count; ++i) x ^= H.column_u64(rep.idx[i]) & mask;
      out.failure = "decoder case [" + tr + "] returned " +
                    std::to_string(rep.count) + " columns, xor " +
                    (x == out.failed_syndrome ? std::string("matches")
                                              : std::string("MISMATCH"));
    } catch (const std::exception& e) {
      out.failure = std::string("decoder threw: ") + e.what();
    }
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace covcode
