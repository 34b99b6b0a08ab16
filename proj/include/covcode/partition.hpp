#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace covcode {

// Ordered partition of the column set {0..n-1} (0-based internally;
// all file formats and reports use 1-based indices).
struct Partition {
  std::vector<std::vector<uint32_t>> subsets;

  size_t size() const { return subsets.size(); }

  // Throws unless subsets are nonempty, disjoint, and cover 0..n-1.
  void validate(uint64_t n) const;

  // col -> subset id
  std::vector<uint32_t> subset_map(uint64_t n) const;

  static Partition trivial(uint64_t n);

  // Pinned columns become singleton subsets, listed first in pin order;
  // surviving subsets keep their relative order. A refinement of a valid
  // (R,l)-partition stays valid.
  Partition refine(const std::vector<uint32_t>& pinned_cols) const;

  // One subset per line, whitespace-separated 1-based indices, '#' comments.
  static Partition parse(const std::string& text);
  std::string emit() const;
};

}  // namespace covcode
