#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "covcode/gf2m.hpp"
#include "covcode/record.hpp"
#include "covcode/verifier.hpp"

namespace covcode {

// The q^m-concatenating construction variants for q = 2.
enum class Variant : uint8_t {
  QM1_2, QM2_2, QM3_2, QM4_2, QM5_2, QM6_2,
  QM1_3, QM2_3, QM3_3, QM4_3, QM5_3,
  QM1_4, QM2_4, QM3_4, QM4_4,
};

int variant_radius(Variant v);
std::string variant_name(Variant v);                    // "QM4^2"
std::optional<Variant> parse_variant(std::string tag);  // QM4^2 | qm4-2 | QM4_2

enum class DKind : uint8_t { D1, D2, D3, D4, D5, D6 };
DKind variant_dkind(Variant v);
std::string dkind_name(DKind k);

struct ConstructionSpec {
  Variant variant = Variant::QM2_2;
  std::string start;             // registry name of the starting record
  std::string start_partition;   // partition claim on the starting record
  int m = 0;
  std::string inner;             // [n_2m, n_2m - 2m]_2 2 code for D4/D5
  std::string inner_partition;
  std::string out;               // name of the result record

  Json to_json() const;
  static ConstructionSpec from_json(const Json& j);
};

// STAR is the '*' indicator; field indicators are their m-bit values.
constexpr int32_t kStar = -1;

struct IndicatorAssignment {
  std::vector<int32_t> per_subset;   // subset -> indicator
  std::vector<int32_t> per_column;   // starting column -> indicator
  std::vector<uint32_t> value_rep;   // field value -> column carrying it (or ~0)
  uint32_t star_rep = UINT32_MAX;    // column carrying STAR (or ~0)
  uint32_t star_subset = UINT32_MAX;
};

struct Rep {
  uint8_t count = 0;
  uint64_t idx[4] = {0, 0, 0, 0};
  void add(uint64_t i) { idx[count++] = i; }
};

// Per-record syndrome decoder: returns <= R column indices XOR-summing to
// the syndrome, from pairwise-distinct subsets of the record's designated
// partition, with at least the claimed ell columns. Seeds use precomputed
// tables, constructed records replay their theorem's case analysis.
class RecordDecoder {
 public:
  virtual ~RecordDecoder() = default;
  virtual Rep decode(uint64_t syndrome, std::string* trace) const = 0;
  int R = 0;
  int ell = 0;
};

struct Config {
  std::map<int, uint32_t> field_poly;  // gf2m.poly.<m> overrides
  VerifyBudget budget;
  uint64_t store_matrix_max_cols = 1u << 20;

  uint32_t poly_for(int m) const {
    auto it = field_poly.find(m);
    return it != field_poly.end() ? it->second : FieldContext::default_poly(m);
  }
};

// In-memory record store; seeds materialize on first use. The registry
// layer (registry.hpp) persists and reloads it.
class Workspace {
 public:
  Config config;

  bool has(const std::string& name) const;
  std::shared_ptr<CodeRecord> find(const std::string& name);  // nullptr if absent
  std::shared_ptr<CodeRecord> get(const std::string& name);   // loads seeds, throws
  void put(const std::shared_ptr<CodeRecord>& rec);
  std::vector<std::string> names() const;

  // Decoder replaying rec's construction (or the seed lookup table over the
  // named partition). Cached per (record, partition).
  std::shared_ptr<const RecordDecoder> decoder(const std::string& rec_name,
                                               const std::string& partition = "");

 private:
  std::map<std::string, std::shared_ptr<CodeRecord>> records_;
  std::map<std::string, std::shared_ptr<const RecordDecoder>> decoders_;
};

// Canonical indicator assignment: subsets in order take enumerate-order
// field values (skipping variant-forbidden ones); STAR only where the
// variant's recipe demands it; for complete-indicator-set variants the
// leftover values go to spare columns (non-first columns of subsets).
IndicatorAssignment assign_indicators(Variant v, const Partition& p0,
                                      const CodeRecord& start, int m);

// Shapes of the A(h_j, beta_j) block and the D tail, exposed for tests.
std::vector<BitColumn> build_A_block(const BitColumn& h, int32_t beta, int m,
                                     int R, const FieldContext& field);
std::shared_ptr<DenseMatrix> build_D(DKind kind, uint32_t r0, int m, int R,
                                     const FieldContext& field,
                                     const ColumnSource* inner);

std::vector<std::string> admissibility_check(Workspace& ws,
                                             const ConstructionSpec& spec);

// Builds the record, its derived partitions (for the variants whose proofs
// specify one), and the provenance needed to replay the decoder. Refuses
// inadmissible specs and unverified starting partitions.
std::shared_ptr<CodeRecord> construct(Workspace& ws, const ConstructionSpec& spec);

// Decode through a record's construction; errors if the record has none.
Rep decode_syndrome(Workspace& ws, const std::string& rec_name,
                    uint64_t syndrome, std::string* trace = nullptr);

struct SampleReport {
  bool pass = false;
  uint64_t trials = 0;
  uint64_t failed_trial = 0;
  uint64_t failed_syndrome = 0;
  std::string failure;  // includes the decoder case trace
  double seconds = 0;
};

// Replays the proof decoder on seeded uniform random syndromes; checks the
// returned columns XOR to the syndrome, count <= R, and (when a partition
// claim is named) distinct subsets with ell <= count <= R.
SampleReport decoder_sample_verify(Workspace& ws, const std::string& rec_name,
                                   uint64_t trials, uint64_t seed,
                                   const std::string& partition = "",
                                   int threads = 0);

}  // namespace covcode
