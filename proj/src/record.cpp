#include "covcode/record.hpp"

#include <stdexcept>

namespace covcode {

std::string to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Unverified: return "unverified";
    case VerifyStatus::Exhaustive: return "exhaustive";
    case VerifyStatus::Sampled: return "decoder-sampled";
    case VerifyStatus::Structural: return "structural";
    case VerifyStatus::Failed: return "failed";
  }
  return "?";
}

VerifyStatus verify_status_from_string(const std::string& s) {
  if (s == "unverified") return VerifyStatus::Unverified;
  if (s == "exhaustive") return VerifyStatus::Exhaustive;
  if (s == "decoder-sampled") return VerifyStatus::Sampled;
  if (s == "structural") return VerifyStatus::Structural;
  if (s == "failed") return VerifyStatus::Failed;
  throw std::runtime_error("unknown verification status: " + s);
}

Partition DerivedPartition::materialize(uint64_t n) const {
  Partition p;
  p.subsets.resize(subsets);
  for (uint64_t c = 0; c < n; ++c) p.subsets[subset_of(c)].push_back(uint32_t(c));
  for (const auto& s : p.subsets)
    if (s.empty()) throw std::runtime_error("derived partition has an empty subset");
  return p;
}

uint32_t PartitionClaim::subset_of(uint64_t col) const {
  if (rule) return rule->subset_of(col);
  // explicit partitions stay small; linear scan is not used on hot paths
  for (uint32_t s = 0; s < explicit_partition->subsets.size(); ++s)
    for (uint32_t c : explicit_partition->subsets[s])
      if (c == col) return s;
  throw std::out_of_range("partition claim: column not covered");
}

std::vector<uint32_t> PartitionClaim::subset_map(uint64_t n) const {
  if (rule) {
    std::vector<uint32_t> map(n);
    for (uint64_t c = 0; c < n; ++c) map[c] = rule->subset_of(c);
    return map;
  }
  return explicit_partition->subset_map(n);
}

const PartitionClaim* CodeRecord::find_partition(const std::string& pname) const {
  for (const auto& p : partitions)
    if (p.name == pname) return &p;
  return nullptr;
}

PartitionClaim* CodeRecord::find_partition(const std::string& pname) {
  for (auto& p : partitions)
    if (p.name == pname) return &p;
  return nullptr;
}

const PartitionClaim* CodeRecord::partition_for_ell(int ell) const {
  const PartitionClaim* best = nullptr;
  for (const auto& p : partitions) {
    if (p.ell != ell) continue;
    if (!best || p.subsets < best->subsets) best = &p;
  }
  return best;
}

void CodeRecord::check_invariants() const {
  if (claimed_ell > claimed_R)
    throw std::runtime_error(name + ": claimed ell exceeds claimed R");
  if (claimed_ell >= 1 && claimed_d >= 0 && claimed_d > claimed_R)
    throw std::runtime_error(name + ": ell >= 1 requires d <= R");
  for (const auto& p : partitions) {
    if (p.subsets < uint32_t(p.R))
      throw std::runtime_error(name + "/" + p.name + ": fewer subsets than R");
    if (p.subsets > n())
      throw std::runtime_error(name + "/" + p.name + ": more subsets than columns");
  }
}

Json CodeRecord::claims_json() const {
  Json j;
  j["name"] = name;
  j["n"] = n();
  j["r"] = r();
  j["R"] = claimed_R;
  if (claimed_d >= 0) j["d"] = claimed_d;
  j["ell"] = claimed_ell;
  j["radius_status"] = to_string(radius_status);
  if (radius_trials) j["radius_trials"] = radius_trials;
  j["d_status"] = to_string(d_status);
  if (!d_witness.empty()) {
    Json w = Json::array();
    for (uint32_t c : d_witness) w.push_back(c + 1);
    j["d_witness"] = w;
  }
  if (!zero_triple.empty()) {
    Json w = Json::array();
    for (uint32_t c : zero_triple) w.push_back(c + 1);
    j["zero_triple"] = w;
    j["star_eligible"] = star_eligible;
  }
  Json parts = Json::array();
  for (const auto& p : partitions) {
    Json pj;
    pj["name"] = p.name;
    pj["R"] = p.R;
    pj["ell"] = p.ell;
    pj["subsets"] = p.subsets;
    pj["status"] = to_string(p.status);
    if (p.sample_trials) pj["sample_trials"] = p.sample_trials;
    pj["stored"] = bool(p.explicit_partition);
    parts.push_back(pj);
  }
  j["partitions"] = parts;
  j["provenance"] = provenance;
  return j;
}

}  // namespace covcode
