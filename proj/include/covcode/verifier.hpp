#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covcode/matrix.hpp"

namespace covcode {

struct VerifyBudget {
  // Refuse jobs whose combination count or coverage bitmap exceeds these.
  double max_combinations = 5e9;
  uint64_t max_bitmap_bytes = 512ull << 20;
  int threads = 0;  // 0 = hardware concurrency
  bool heavy = false;  // acknowledged heavy run: lifts both limits

  double combination_limit() const { return heavy ? 1e18 : max_combinations; }
  uint64_t bitmap_limit() const { return heavy ? ~uint64_t(0) : max_bitmap_bytes; }
  int thread_count() const;
};

// Work estimate sum_{i=lo..hi} C(n,i) in double precision.
double combination_work(uint64_t n, int lo, int hi);

struct CoverageReport {
  bool refused = false;
  std::string refusal;
  int verified_R = -1;  // -1: some syndrome uncovered within rmax
  // layer_counts[i] = syndromes first covered by a sum of exactly i columns
  std::vector<uint64_t> layer_counts;
  uint64_t uncovered_witness = 0;  // valid when verified_R == -1
  double seconds = 0;

  uint64_t covered_total() const {
    uint64_t t = 0;
    for (uint64_t c : layer_counts) t += c;
    return t;
  }
};

// Exact covering radius if <= rmax, via a 2^r-bit coverage bitmap filled
// layer by layer (layer i = sums of i distinct column positions). Direct
// combination enumeration or frontier XOR-translation, whichever the cost
// model picks. Requires r <= 32.
CoverageReport covering_radius_exhaustive(const ColumnSource& H, int rmax,
                                          const VerifyBudget& budget = {});

struct DistanceReport {
  bool refused = false;
  std::string refusal;
  int d = -1;  // -1: greater than limit
  std::vector<uint32_t> witness;  // 0-based column indices, XOR == 0
};

// Smallest number of linearly dependent columns if <= limit; the witness is
// the lexicographically first dependent set found.
DistanceReport min_distance_upto(const ColumnSource& H, int limit,
                                 const VerifyBudget& budget = {});

// d >= 3 holds iff all columns are nonzero and pairwise distinct; cheap at
// any length. Returns 1, 2, or 3 (meaning ">= 3").
int distance_lower_bound_3(const ColumnSource& H, std::vector<uint32_t>* witness);

struct PartitionReport {
  bool refused = false;
  std::string refusal;
  bool valid = false;
  uint64_t witness = 0;  // first syndrome with no compliant representation
  double seconds = 0;
};

// Confirms every syndrome is a sum of j columns from pairwise-distinct
// subsets, ell <= j <= R. subset_map maps column -> subset id.
PartitionReport verify_partition(const ColumnSource& H,
                                 const std::vector<uint32_t>& subset_map, int R,
                                 int ell, const VerifyBudget& budget = {});

// Every syndrome (zero included) must be a sum of exactly three distinct
// column positions. Requires r <= 26.
PartitionReport sum3_cover_check(const ColumnSource& H,
                                 const VerifyBudget& budget = {});

// "2 or 3 columns" coverage; the inner-code condition under which the
// R = 3 constructions reach ell = 2.
PartitionReport sum23_cover_check(const ColumnSource& H,
                                  const VerifyBudget& budget = {});

// Lemma: ell >= 1 is possible iff d <= R. Returns 0 or 1.
int ell_max_quick(const ColumnSource& H, int R, const VerifyBudget& budget = {});

}  // namespace covcode
