#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covcode/construct.hpp"

namespace covcode {

// Closed-form bound functions on the code length, each with a congruence
// domain on r.
enum class Bound : uint8_t {
  phi,        // 27*2^(r/2-4)-1, even r >= 8
  f,          // 5*2^((r-3)/2)-1, odd r >= 3
  Phi,        // 26*2^(r/2-4)-1, r = 10, 18, 20, even r >= 28
  PhiHat,     // 53*2^(r/2-5)-3, r = 22, 24, 26
  varphi,     // 3*2^((r-1)/3)-1, r = 3t-2
  gamma,      // 821*2^((r-26)/3)-1, r = 3t-1 >= 41
  psi,        // 144*2^((r-18)/3)-1, r = 3t, r = 15 or >= 30
  Upsilon,    // 819*2^((r-26)/3)-1, r = 26 or r = 3t-1 >= 44
  UpsilonHat, // 820*2^((r-26)/3)-2, r = 38, 41
  fam4_known,    // 2944*2^(r/4-10)-2, r = 4t, r = 20 or >= 40
  fam4_new,      // 2943*2^(r/4-10)-1, r = 40 or 4t >= 68
  fam4_sporadic, // 2944*2^(r/4-10)-3, r = 4t >= 48
};

std::string bound_name(Bound b);
std::optional<Bound> parse_bound(const std::string& name);
int64_t eval_bound(Bound b, int r);  // throws on domain violation

// Decrease of the known upper bound on the length function.
int64_t delta(int r, int R);  // throws where no new result exists

struct TableRow {
  int r = 0;
  std::string label;     // bound name, or empty for cited constants
  int64_t n = 0;
  bool exact = false;    // '*' rows: the exact value of the length function
  bool is_new = false;   // rows contributed by the constructions here
  std::string density;   // always recomputed from (n, r, R)
  std::string p0, p1, p2;  // partition sizes as tabulated (R=2 uses p0)
  std::string delta_s;
  std::string n0, m;     // chain inputs where tabulated
};

std::vector<TableRow> render_table(int R, int rmax = 64);
std::string format_table(const std::vector<TableRow>& rows, int R,
                         const std::string& format);  // text | csv | json

struct ChainStep {
  int r = 0;
  ConstructionSpec spec;
  std::string record_name;
  int64_t expected_n = 0;
  uint32_t expected_subsets = 0;  // of the chained derived partition
  std::string expected_p;         // bookkeeping string, e.g. "2^9+1"
  std::string chained_partition;  // claim carried to the next step
  bool parameter_only = false;    // missing seed: no matrix is built
};

// The iterative family chains; R = 4 requires the imported [90,70] record
// (name "ext9070") and degrades to parameter-only rows without it.
std::vector<ChainStep> generate_family(Workspace& ws, int R, int rmax = 64);

struct FamilyStepReport {
  ChainStep step;
  bool constructed = false;
  bool n_ok = false;
  bool p_ok = false;
  std::string radius_check;     // "exhaustive R=2" | "sampled 1000000" | ...
  std::string partition_check;
  bool pass = false;
  std::string note;
};

struct FamilyReport {
  std::vector<FamilyStepReport> steps;
  bool pass = true;
};

// Construct + verify the chain: exhaustive up to verify_upto (work and
// memory permitting), seeded decoder sampling beyond.
FamilyReport run_family(Workspace& ws, int R, int rmax, bool construct_records,
                        int verify_upto, uint64_t trials, uint64_t seed);

}  // namespace covcode
