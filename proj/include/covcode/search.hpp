#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "covcode/partition.hpp"
#include "covcode/verifier.hpp"

namespace covcode {

// Reproduces the "computer search" for small (R,l)-partitions.
struct SearchConfig {
  int target_R = 2;
  int target_ell = 0;
  uint32_t max_subsets = 0;  // 0 = anything valid
  double budget_seconds = 60;
  uint64_t rng_seed = 1;
  enum class Strategy { GreedyMerge, Annealing } strategy = Strategy::GreedyMerge;
  VerifyBudget verify;
};

struct SearchResult {
  bool found = false;            // met max_subsets within budget
  Partition best;                // always a valid partition (trivial at worst)
  uint32_t best_subsets = 0;
  uint64_t evaluations = 0;
  double seconds = 0;
};

// Greedy merge starts from the trivial partition (always valid) and merges
// subset pairs while verify_partition stays green, with seeded random
// restarts; annealing perturbs a fixed-size assignment scoring uncovered
// syndromes. Every returned partition has passed verify_partition.
SearchResult search_partition(const ColumnSource& H, const SearchConfig& cfg);

}  // namespace covcode
