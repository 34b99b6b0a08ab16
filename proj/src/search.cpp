#include "covcode/search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>

namespace covcode {

namespace {

using Clock = std::chrono::steady_clock;

// Reuses one bitmap across thousands of candidate evaluations; the search
// loop is sequential and seed-deterministic.
class FastChecker {
 public:
  FastChecker(const ColumnSource& H, int R, int ell)
      : r_(H.rows()), R_(R), ell_(ell) {
    if (r_ > 28) throw std::runtime_error("partition search needs r <= 28");
    cols_ = materialize_u64(H);
    space_ = uint64_t(1) << r_;
    words_.assign((space_ + 63) / 64, 0);
  }

  uint64_t evaluations = 0;

  bool valid(const std::vector<uint32_t>& sub) { return uncovered(sub) == 0; }

  uint64_t uncovered(const std::vector<uint32_t>& sub) {
    ++evaluations;
    std::fill(words_.begin(), words_.end(), 0);
    if (ell_ == 0) set(0);
    const uint32_t n = uint32_t(cols_.size());
    for (int layer = std::max(1, ell_); layer <= R_; ++layer) {
      switch (layer) {
        case 1:
          for (uint32_t a = 0; a < n; ++a) set(cols_[a]);
          break;
        case 2:
          for (uint32_t a = 0; a < n; ++a)
            for (uint32_t b = a + 1; b < n; ++b)
              if (sub[a] != sub[b]) set(cols_[a] ^ cols_[b]);
          break;
        case 3:
          for (uint32_t a = 0; a < n; ++a)
            for (uint32_t b = a + 1; b < n; ++b) {
              if (sub[a] == sub[b]) continue;
              uint64_t sab = cols_[a] ^ cols_[b];
              for (uint32_t c = b + 1; c < n; ++c)
                if (sub[c] != sub[a] && sub[c] != sub[b]) set(sab ^ cols_[c]);
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
                for (uint32_t d = c + 1; d < n; ++d)
                  if (sub[d] != sub[a] && sub[d] != sub[b] && sub[d] != sub[c])
                    set(sabc ^ cols_[d]);
              }
            }
          break;
      }
    }
    uint64_t pc = 0;
    for (uint64_t w : words_) pc += std::popcount(w);
    return space_ - pc;
  }

  size_t n() const { return cols_.size(); }

 private:
  void set(uint64_t s) { words_[s >> 6] |= uint64_t(1) << (s & 63); }
  uint32_t r_;
  int R_, ell_;
  uint64_t space_;
  std::vector<uint64_t> cols_;
  std::vector<uint64_t> words_;
};

Partition from_assignment(const std::vector<uint32_t>& sub) {
  // subsets ordered by smallest member
  uint32_t maxid = 0;
  for (uint32_t s : sub) maxid = std::max(maxid, s);
  std::vector<std::vector<uint32_t>> buckets(maxid + 1);
  for (uint32_t c = 0; c < sub.size(); ++c) buckets[sub[c]].push_back(c);
  Partition p;
  for (auto& b : buckets)
    if (!b.empty()) p.subsets.push_back(std::move(b));
  std::sort(p.subsets.begin(), p.subsets.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return p;
}

}  // namespace

SearchResult search_partition(const ColumnSource& H, const SearchConfig& cfg) {
  auto t0 = Clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };
  FastChecker check(H, cfg.target_R, cfg.target_ell);
  const uint32_t n = uint32_t(check.n());

  std::vector<uint32_t> trivial(n);
  std::iota(trivial.begin(), trivial.end(), 0);
  if (!check.valid(trivial))
    throw std::runtime_error(
        "trivial partition is not a valid (R,l)-partition; the matrix does "
        "not meet the search preconditions");

  SearchResult res;
  res.best = from_assignment(trivial);
  res.best_subsets = n;

  std::mt19937_64 rng(cfg.rng_seed);
  uint32_t goal = cfg.max_subsets ? cfg.max_subsets : uint32_t(cfg.target_R);

  if (cfg.strategy == SearchConfig::Strategy::GreedyMerge) {
    while (seconds() < cfg.budget_seconds && res.best_subsets > goal) {
      std::vector<uint32_t> sub = trivial;
      std::vector<uint32_t> alive(n);
      std::iota(alive.begin(), alive.end(), 0);
      // one greedy descent: keep merging random valid pairs
      while (alive.size() > std::max<uint32_t>(goal, cfg.target_R) &&
             seconds() < cfg.budget_seconds) {
        bool merged = false;
        std::vector<std::pair<uint32_t, uint32_t>> pairs;
        pairs.reserve(alive.size() * (alive.size() - 1) / 2);
        for (size_t i = 0; i < alive.size(); ++i)
          for (size_t j = i + 1; j < alive.size(); ++j)
            pairs.emplace_back(alive[i], alive[j]);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        for (auto [a, b] : pairs) {
          std::vector<uint32_t> tmp = sub;
          for (auto& s : tmp)
            if (s == b) s = a;
          if (check.valid(tmp)) {
            sub = std::move(tmp);
            alive.erase(std::find(alive.begin(), alive.end(), b));
            merged = true;
            break;
          }
          if (seconds() >= cfg.budget_seconds) break;
        }
        if (!merged) break;  // local optimum
      }
      if (alive.size() < res.best_subsets) {
        res.best_subsets = uint32_t(alive.size());
        res.best = from_assignment(sub);
      }
    }
  } else {
    // annealing at a fixed subset count, scored by uncovered syndromes
    uint32_t p = goal;
    std::vector<uint32_t> sub(n);
    for (uint32_t c = 0; c < n; ++c) sub[c] = c % p;
    uint64_t cur = check.uncovered(sub);
    double temp = 4.0;
    std::uniform_int_distribution<uint32_t> colD(0, n - 1), subD(0, p - 1);
    std::uniform_real_distribution<double> U(0, 1);
    while (seconds() < cfg.budget_seconds && cur != 0) {
      uint32_t c = colD(rng), to = subD(rng);
      uint32_t from = sub[c];
      if (from == to) continue;
      sub[c] = to;
      uint64_t nxt = check.uncovered(sub);
      if (nxt <= cur || U(rng) < std::exp(-double(nxt - cur) / temp)) {
        cur = nxt;
      } else {
        sub[c] = from;
      }
      temp = std::max(0.01, temp * 0.9995);
    }
    if (cur == 0) {
      bool nonempty = true;
      std::vector<uint8_t> seen(p, 0);
      for (uint32_t s : sub) seen[s] = 1;
      for (uint8_t s : seen) nonempty &= s != 0;
      if (nonempty) {
        res.best_subsets = p;
        res.best = from_assignment(sub);
      }
    }
  }

  res.found = res.best_subsets <= goal;
  res.evaluations = check.evaluations;
  res.seconds = seconds();
  return res;
}

}  // namespace covcode
