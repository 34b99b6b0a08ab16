#include "covcode/partition.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace covcode {

void Partition::validate(uint64_t n) const {
  std::vector<uint8_t> seen(n, 0);
  uint64_t total = 0;
  for (const auto& s : subsets) {
    if (s.empty()) throw std::runtime_error("partition: empty subset");
    for (uint32_t c : s) {
      if (c >= n) throw std::runtime_error("partition: column index out of range");
      if (seen[c]) throw std::runtime_error("partition: column " +
                                            std::to_string(c + 1) + " repeated");
      seen[c] = 1;
      ++total;
    }
  }
  if (total != n) throw std::runtime_error("partition: does not cover all columns");
}

std::vector<uint32_t> Partition::subset_map(uint64_t n) const {
  std::vector<uint32_t> map(n, UINT32_MAX);
  for (uint32_t s = 0; s < subsets.size(); ++s)
    for (uint32_t c : subsets[s]) map[c] = s;
  for (uint64_t c = 0; c < n; ++c)
    if (map[c] == UINT32_MAX)
      throw std::runtime_error("partition: column " + std::to_string(c + 1) +
                               " not covered");
  return map;
}

Partition Partition::trivial(uint64_t n) {
  Partition p;
  p.subsets.resize(n);
  for (uint64_t c = 0; c < n; ++c) p.subsets[c] = {uint32_t(c)};
  return p;
}

Partition Partition::refine(const std::vector<uint32_t>& pinned_cols) const {
  std::vector<uint8_t> pinned_flag;
  for (uint32_t c : pinned_cols) {
    if (c >= pinned_flag.size()) pinned_flag.resize(c + 1, 0);
    pinned_flag[c] = 1;
  }
  Partition out;
  for (uint32_t c : pinned_cols) out.subsets.push_back({c});
  for (const auto& s : subsets) {
    std::vector<uint32_t> rest;
    for (uint32_t c : s)
      if (c >= pinned_flag.size() || !pinned_flag[c]) rest.push_back(c);
    if (!rest.empty()) out.subsets.push_back(std::move(rest));
  }
  return out;
}

Partition Partition::parse(const std::string& text) {
  Partition p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (char& ch : line)
      if (ch == ',' || ch == '{' || ch == '}') ch = ' ';
    std::istringstream ls(line);
    std::vector<uint32_t> subset;
    uint64_t idx;
    while (ls >> idx) {
      if (idx == 0) throw std::runtime_error("partition: indices are 1-based");
      subset.push_back(uint32_t(idx - 1));
    }
    if (!subset.empty()) p.subsets.push_back(std::move(subset));
  }
  if (p.subsets.empty()) throw std::runtime_error("partition: no subsets");
  return p;
}

std::string Partition::emit() const {
  std::ostringstream out;
  for (const auto& s : subsets) {
    for (size_t i = 0; i < s.size(); ++i) {
      if (i) out << ' ';
      out << s[i] + 1;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace covcode
