#include "covcode/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <functional>
#include <thread>

namespace covcode {

int VerifyBudget::thread_count() const {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

double combination_work(uint64_t n, int lo, int hi) {
  double total = 0;
  for (int i = std::max(lo, 0); i <= hi; ++i) {
    double c = 1;
    for (int k = 0; k < i; ++k) c = c * double(n - k) / double(k + 1);
    total += c;
  }
  return total;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Bitmap {
 public:
  explicit Bitmap(uint64_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  void set(uint64_t i) {
    std::atomic_ref<uint64_t> w(words_[i >> 6]);
    uint64_t mask = uint64_t(1) << (i & 63);
    if (!(w.load(std::memory_order_relaxed) & mask))
      w.fetch_or(mask, std::memory_order_relaxed);
  }
  void set_serial(uint64_t i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
  bool get(uint64_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  uint64_t popcount() const {
    uint64_t t = 0;
    for (uint64_t w : words_) t += std::popcount(w);
    return t;
  }
  uint64_t first_clear() const {
    for (uint64_t wi = 0; wi < words_.size(); ++wi) {
      if (words_[wi] != ~uint64_t(0)) {
        uint64_t i = wi * 64 + std::countr_one(words_[wi]);
        if (i < bits_) return i;
      }
    }
    return bits_;
  }
  uint64_t size() const { return bits_; }

 private:
  uint64_t bits_;
  std::vector<uint64_t> words_;
};

// Runs fn(first_index) over [0, n) with dynamic chunks.
void parallel_over(uint64_t n, int threads, const std::function<void(uint64_t)>& fn) {
  if (threads <= 1 || n < 128) {
    for (uint64_t a = 0; a < n; ++a) fn(a);
    return;
  }
  std::atomic<uint64_t> next{0};
  const uint64_t chunk = 16;
  auto worker = [&] {
    for (;;) {
      uint64_t a0 = next.fetch_add(chunk, std::memory_order_relaxed);
      if (a0 >= n) return;
      uint64_t a1 = std::min(n, a0 + chunk);
      for (uint64_t a = a0; a < a1; ++a) fn(a);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

// Sets every XOR of `layer` distinct columns, optionally restricted to
// pairwise-distinct subsets.
void fill_layer(Bitmap& bm, const std::vector<uint64_t>& cols, int layer,
                const std::vector<uint32_t>* sub, uint64_t mask, int threads) {
  const uint64_t n = cols.size();
  switch (layer) {
    case 1:
      for (uint64_t a = 0; a < n; ++a) bm.set(cols[a] & mask);
      break;
    case 2:
      parallel_over(n, threads, [&](uint64_t a) {
        uint64_t sa = cols[a];
        for (uint64_t b = a + 1; b < n; ++b) {
          if (sub && (*sub)[a] == (*sub)[b]) continue;
          bm.set((sa ^ cols[b]) & mask);
        }
      });
      break;
    case 3:
      parallel_over(n, threads, [&](uint64_t a) {
        uint64_t sa = cols[a];
        for (uint64_t b = a + 1; b < n; ++b) {
          if (sub && (*sub)[a] == (*sub)[b]) continue;
          uint64_t sb = sa ^ cols[b];
          for (uint64_t c = b + 1; c < n; ++c) {
            if (sub && ((*sub)[c] == (*sub)[a] || (*sub)[c] == (*sub)[b])) continue;
            bm.set((sb ^ cols[c]) & mask);
          }
        }
      });
      break;
    case 4:
      parallel_over(n, threads, [&](uint64_t a) {
        uint64_t sa = cols[a];
        for (uint64_t b = a + 1; b < n; ++b) {
          if (sub && (*sub)[a] == (*sub)[b]) continue;
          uint64_t sb = sa ^ cols[b];
          for (uint64_t c = b + 1; c < n; ++c) {
            if (sub && ((*sub)[c] == (*sub)[a] || (*sub)[c] == (*sub)[b])) continue;
            uint64_t sc = sb ^ cols[c];
            for (uint64_t d = c + 1; d < n; ++d) {
              if (sub && ((*sub)[d] == (*sub)[a] || (*sub)[d] == (*sub)[b] ||
                          (*sub)[d] == (*sub)[c]))
                continue;
              bm.set((sc ^ cols[d]) & mask);
            }
          }
        }
      });
      break;
    default:
      break;
  }
}

}  // namespace

CoverageReport covering_radius_exhaustive(const ColumnSource& H, int rmax,
                                          const VerifyBudget& budget) {
  auto t0 = Clock::now();
  CoverageReport rep;
  uint32_t r = H.rows();
  uint64_t n = H.cols();
  if (r > 32) {
    rep.refused = true;
    rep.refusal = "exhaustive radius check requires r <= 32, got r = " +
                  std::to_string(r);
    return rep;
  }
  double work = combination_work(n, 0, rmax);
  if (work > budget.combination_limit()) {
    rep.refused = true;
    rep.refusal = "estimated work " + std::to_string(work) +
                  " combinations exceeds budget (use --heavy to override)";
    return rep;
  }
  uint64_t space = uint64_t(1) << r;
  if (space / 8 > budget.bitmap_limit()) {
    rep.refused = true;
    rep.refusal = "coverage bitmap of 2^" + std::to_string(r) +
                  " bits exceeds memory budget (use --heavy to override)";
    return rep;
  }

  std::vector<uint64_t> cols = materialize_u64(H);
  uint64_t mask = (r == 64) ? ~uint64_t(0) : ((uint64_t(1) << r) - 1);
  Bitmap bm(space);

  // Frontier translation: each new layer is the previous frontier shifted by
  // every column. Wins when the space is much smaller than the combination
  // count; the common case here is the direct enumeration.
  double frontier_cost = double(space) * double(n);
  bool use_frontier = space <= (uint64_t(1) << 22) && frontier_cost < work;

  bm.set_serial(0);
  rep.layer_counts.assign(1, 1);
  uint64_t covered = 1;

  if (use_frontier) {
    std::vector<uint32_t> frontier{0}, next;
    for (int layer = 1; layer <= rmax && covered < space; ++layer) {
      next.clear();
      for (uint32_t f : frontier) {
        for (uint64_t j = 0; j < n; ++j) {
          uint32_t s = uint32_t((f ^ cols[j]) & mask);
          if (!bm.get(s)) {
            bm.set_serial(s);
            next.push_back(s);
          }
        }
      }
      rep.layer_counts.push_back(next.size());
      covered += next.size();
      frontier.swap(next);
    }
  } else {
    int threads = budget.thread_count();
    for (int layer = 1; layer <= rmax && covered < space; ++layer) {
      fill_layer(bm, cols, layer, nullptr, mask, threads);
      uint64_t now = bm.popcount();
      rep.layer_counts.push_back(now - covered);
      covered = now;
    }
  }

  if (covered == space)
    rep.verified_R = int(rep.layer_counts.size()) - 1;
  else
    rep.uncovered_witness = bm.first_clear();
  rep.seconds = elapsed(t0);
  return rep;
}

int distance_lower_bound_3(const ColumnSource& H, std::vector<uint32_t>* witness) {
  uint64_t n = H.cols();
  if (H.rows() <= 64) {
    std::vector<uint64_t> cols = materialize_u64(H);
    std::vector<uint32_t> order(n);
    for (uint64_t i = 0; i < n; ++i) order[i] = uint32_t(i);
    for (uint64_t i = 0; i < n; ++i)
      if (cols[i] == 0) {
        if (witness) *witness = {uint32_t(i)};
        return 1;
      }
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return cols[a] < cols[b]; });
    for (uint64_t i = 0; i + 1 < n; ++i)
      if (cols[order[i]] == cols[order[i + 1]]) {
        uint32_t a = order[i], b = order[i + 1];
        if (witness) *witness = {std::min(a, b), std::max(a, b)};
        return 2;
      }
    return 3;
  }
  // wide columns: compare via BitColumn
  std::vector<std::pair<BitColumn, uint32_t>> cs;
  cs.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    BitColumn c = H.column(i);
    if (c.is_zero()) {
      if (witness) *witness = {uint32_t(i)};
      return 1;
    }
    cs.emplace_back(std::move(c), uint32_t(i));
  }
  std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) {
    return a.first.words() < b.first.words();
  });
  for (uint64_t i = 0; i + 1 < n; ++i)
    if (cs[i].first == cs[i + 1].first) {
      uint32_t a = cs[i].second, b = cs[i + 1].second;
      if (witness) *witness = {std::min(a, b), std::max(a, b)};
      return 2;
    }
  return 3;
}

DistanceReport min_distance_upto(const ColumnSource& H, int limit,
                                 const VerifyBudget& budget) {
  DistanceReport rep;
  uint64_t n = H.cols();
  double work = combination_work(n, 1, limit);
  if (work > budget.combination_limit()) {
    rep.refused = true;
    rep.refusal = "distance search work exceeds budget";
    return rep;
  }
  std::vector<uint32_t> w2;
  int lb = distance_lower_bound_3(H, &w2);
  if (lb <= 2) {
    if (lb <= limit) {
      rep.d = lb;
      rep.witness = w2;
    }
    return rep;
  }
  if (limit < 3 || H.rows() > 64) return rep;
  std::vector<uint64_t> cols = materialize_u64(H);
  // lexicographic odometer over combinations of size d = 3..limit
  std::vector<uint32_t> idx;
  std::vector<uint64_t> pre;
  for (int d = 3; d <= limit; ++d) {
    idx.assign(d, 0);
    for (int i = 0; i < d; ++i) idx[i] = uint32_t(i);
    pre.assign(d + 1, 0);
    for (;;) {
      for (int i = 0; i < d; ++i) pre[i + 1] = pre[i] ^ cols[idx[i]];
      if (pre[d] == 0) {
        rep.d = d;
        rep.witness = idx;
        return rep;
      }
      int i = d - 1;
      while (i >= 0 && idx[i] == n - uint64_t(d - i)) --i;
      if (i < 0) break;
      ++idx[i];
      for (int k = i + 1; k < d; ++k) idx[k] = idx[k - 1] + 1;
    }
  }
  return rep;
}

namespace {

PartitionReport coverage_check(const ColumnSource& H,
                               const std::vector<uint32_t>* subset_map, int lo,
                               int hi, bool zero_free,
                               const VerifyBudget& budget) {
  auto t0 = Clock::now();
  PartitionReport rep;
  uint32_t r = H.rows();
  uint64_t n = H.cols();
  if (r > 32) {
    rep.refused = true;
    rep.refusal = "exhaustive partition check requires r <= 32";
    return rep;
  }
  double work = combination_work(n, lo, hi);
  if (work > budget.combination_limit()) {
    rep.refused = true;
    rep.refusal = "estimated work exceeds budget";
    return rep;
  }
  uint64_t space = uint64_t(1) << r;
  if (space / 8 > budget.bitmap_limit()) {
    rep.refused = true;
    rep.refusal = "bitmap exceeds memory budget";
    return rep;
  }
  std::vector<uint64_t> cols = materialize_u64(H);
  uint64_t mask = (r == 64) ? ~uint64_t(0) : ((uint64_t(1) << r) - 1);
  Bitmap bm(space);
  if (zero_free) bm.set_serial(0);
  int threads = budget.thread_count();
  for (int layer = std::max(lo, 1); layer <= hi; ++layer)
    fill_layer(bm, cols, layer, subset_map, mask, threads);
  uint64_t covered = bm.popcount();
  if (covered == space) {
    rep.valid = true;
  } else {
    rep.valid = false;
    rep.witness = bm.first_clear();
  }
  rep.seconds = elapsed(t0);
  return rep;
}

}  // namespace

PartitionReport verify_partition(const ColumnSource& H,
                                 const std::vector<uint32_t>& subset_map, int R,
                                 int ell, const VerifyBudget& budget) {
  return coverage_check(H, &subset_map, ell, R, ell == 0, budget);
}

PartitionReport sum3_cover_check(const ColumnSource& H,
                                 const VerifyBudget& budget) {
  if (H.rows() > 26) {
    PartitionReport rep;
    rep.refused = true;
    rep.refusal = "sum3 check requires r <= 26";
    return rep;
  }
  return coverage_check(H, nullptr, 3, 3, false, budget);
}

PartitionReport sum23_cover_check(const ColumnSource& H,
                                  const VerifyBudget& budget) {
  if (H.rows() > 26) {
    PartitionReport rep;
    rep.refused = true;
    rep.refusal = "sum23 check requires r <= 26";
    return rep;
  }
  return coverage_check(H, nullptr, 2, 3, false, budget);
}

int ell_max_quick(const ColumnSource& H, int R, const VerifyBudget& budget) {
  DistanceReport d = min_distance_upto(H, R, budget);
  return (d.d >= 1 && d.d <= R) ? 1 : 0;
}

}  // namespace covcode
