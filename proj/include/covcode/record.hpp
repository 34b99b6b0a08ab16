#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "covcode/matrix.hpp"
#include "covcode/partition.hpp"

namespace covcode {

using Json = nlohmann::json;

enum class VerifyStatus : uint8_t {
  Unverified,
  Exhaustive,
  Sampled,      // decoder-sampled(count)
  Structural,   // witness-checked claim (e.g. d = 3 on chain records)
  Failed,
};

std::string to_string(VerifyStatus s);
VerifyStatus verify_status_from_string(const std::string& s);

// Partition of a constructed matrix stored as a rule instead of index
// lists; chain records are far too long to materialize subsets.
struct DerivedPartition {
  enum class GroupKind : uint8_t { Whole, Split2, Split3 };

  uint32_t m = 0;      // block width is 2^m
  uint64_t nm = 0;     // D width (D columns come first)
  uint32_t subsets = 0;

  std::vector<uint32_t> col_group;   // starting column -> group id
  std::vector<GroupKind> group_kind; // per group
  std::vector<uint32_t> group_base;  // per group: first subset id
  std::vector<uint8_t> xi_color;     // Split3 only: field value -> color
  std::vector<uint32_t> d_subset;    // D column -> subset id

  uint32_t subset_of(uint64_t col) const {
    if (col < nm) return d_subset[size_t(col)];
    uint64_t a = col - nm;
    uint32_t j = uint32_t(a >> m);
    uint32_t xi = uint32_t(a & ((uint64_t(1) << m) - 1));
    uint32_t g = col_group[j];
    switch (group_kind[g]) {
      case GroupKind::Split2:
        return group_base[g] + (xi != 0 ? 1 : 0);
      case GroupKind::Split3:
        return group_base[g] + xi_color[xi];
      default:
        return group_base[g];
    }
  }

  Partition materialize(uint64_t n) const;
};

// One (R,l)-partition bundled with a record, with its own verification state.
struct PartitionClaim {
  std::string name;
  int R = 0;
  int ell = 0;
  uint32_t subsets = 0;
  std::optional<Partition> explicit_partition;
  std::optional<DerivedPartition> rule;
  VerifyStatus status = VerifyStatus::Unverified;
  uint64_t sample_trials = 0;

  uint32_t subset_of(uint64_t col) const;
  std::vector<uint32_t> subset_map(uint64_t n) const;
  bool materializable(uint64_t n) const { return explicit_partition || n <= (1u << 26); }
};

// A matrix plus its claimed parameters; the unit of the on-disk registry.
struct CodeRecord {
  std::string name;
  MatrixPtr H;

  int claimed_R = -1;
  int claimed_d = -1;  // -1 = unknown
  int claimed_ell = 0;
  std::vector<PartitionClaim> partitions;

  // Columns summing to zero: a minimum-distance witness, and (when the
  // subsets are distinct in the bundled partitions) the dependent set that
  // makes l >= 1 claims work.
  std::vector<uint32_t> d_witness;
  std::vector<uint32_t> zero_triple;
  // zero_triple columns sit in singleton subsets of the designated
  // partition; required of a starting code before the star indicator
  // rewrite (column = sum of the other two) is usable.
  bool star_eligible = false;

  Json provenance;  // seed citation or serialized construction spec

  VerifyStatus radius_status = VerifyStatus::Unverified;
  uint64_t radius_trials = 0;
  VerifyStatus d_status = VerifyStatus::Unverified;
  std::vector<std::string> log;

  uint32_t r() const { return H->rows(); }
  uint64_t n() const { return H->cols(); }

  const PartitionClaim* find_partition(const std::string& pname) const;
  PartitionClaim* find_partition(const std::string& pname);
  // Preferred partition for use as a construction input at a given ell.
  const PartitionClaim* partition_for_ell(int ell) const;

  void check_invariants() const;  // claimed_ell <= claimed_R etc.

  Json claims_json() const;       // everything except the matrix/partition payloads
};

}  // namespace covcode
