#include "covcode/seeds.hpp"

#include <sstream>
#include <stdexcept>

namespace covcode {

namespace {

// Kaikkonen-Rosendahl [51,41] code: H_KR = [I_10 M_KR].
const char* kKrTokens =
    "1B6 193 1CC 187 1F6 F7 16E 140 3C 296 22F 303 381 365 "
    "11D 1A3 274 2F2 254 56 F 41 357 208 34 329 28D 31D 3D5 129 3D7 "
    "B7 3EC 2E2 23C AD 34E 155 2E6 371 D4";

// Ostergard-Kaikkonen [18,9] code: H_OK = [I_9 M_OK].
const char* kOkTokens = "1A0 174 A5 173 17 E8 9 18D 1CE";

// Ostergard-Kaikkonen [19,8] code: H_OK2 = [I_11 M_OK2].
const char* kOk2Tokens = "4EA 771 6 86 1CD 3B4 17E 7AB";

std::shared_ptr<DenseMatrix> from_tokens(uint32_t r, const char* tokens) {
  std::istringstream in(tokens);
  auto m = std::make_shared<DenseMatrix>(r);
  std::string tok;
  while (in >> tok) m->append(column_from_hex_token(tok, r));
  return m;
}

Partition parse_subsets(const char* text) { return Partition::parse(text); }

PartitionClaim explicit_claim(std::string name, int R, int ell, Partition p) {
  PartitionClaim c;
  c.name = std::move(name);
  c.R = R;
  c.ell = ell;
  c.subsets = uint32_t(p.size());
  c.explicit_partition = std::move(p);
  return c;
}

}  // namespace

std::shared_ptr<DenseMatrix> hamming_matrix(int m, uint32_t exclude_w) {
  if (m < 1 || m > 16) throw std::invalid_argument("hamming_matrix: bad m");
  uint32_t count = (1u << m) - 1;
  auto h = std::make_shared<DenseMatrix>(uint32_t(m), count);
  for (uint32_t v = 1; v <= count; ++v) {
    if (v == exclude_w) continue;
    h->append_u64(v);
  }
  return h;
}

Partition kr_partition() {
  return parse_subsets(
      "5 13 43\n20 27\n3 29 33 39 41 48 51\n1 7 19 25 34 45\n2 4 18\n"
      "6 8 12 26 28 35 44\n9 22 23 30\n10 11 15 16 32 42\n14 24 49 50\n"
      "17 21 31 37 46 47\n36 38 40\n");
}

Partition kr_partition_star() {
  // kr_partition refined so that 5, 27, 29 (a dependent triple) plus
  // 13, 43, 20, 3 become singletons: 16 = 2^4 subsets.
  return parse_subsets(
      "5\n27\n29\n13\n43\n20\n3\n33 39 41 48 51\n1 7 19 25 34 45\n2 4 18\n"
      "6 8 12 26 28 35 44\n9 22 23 30\n10 11 15 16 32 42\n14 24 49 50\n"
      "17 21 31 37 46 47\n36 38 40\n");
}

Partition ok_partition() {
  return parse_subsets("1 2 4\n3\n5 8\n6 17\n7 10\n11 14\n12\n13 18\n15\n9\n16\n");
}

std::shared_ptr<CodeRecord> kr_code() {
  auto rec = std::make_shared<CodeRecord>();
  rec->name = "kr";
  rec->H = with_identity_prefix(*from_tokens(10, kKrTokens));
  rec->claimed_R = 2;
  rec->claimed_d = 3;
  rec->claimed_ell = 0;
  rec->d_witness = {4, 26, 28};  // columns 5, 27, 29 (1-based), XOR zero
  rec->zero_triple = {4, 26, 28};
  rec->star_eligible = false;  // singletons only in the starred refinement
  rec->partitions.push_back(explicit_claim("pkr", 2, 0, kr_partition()));
  rec->partitions.push_back(explicit_claim("pkr-star", 2, 0, kr_partition_star()));
  rec->partitions.push_back(
      explicit_claim("trivial", 2, 0, Partition::trivial(rec->n())));
  rec->provenance = {{"seed", "kr"}, {"source", "Kaikkonen-Rosendahl [51,41] code"}};
  rec->check_invariants();
  return rec;
}

std::shared_ptr<CodeRecord> ok_code() {
  auto rec = std::make_shared<CodeRecord>();
  rec->name = "ok";
  rec->H = with_identity_prefix(*from_tokens(9, kOkTokens));
  rec->claimed_R = 3;
  rec->claimed_d = 3;
  rec->claimed_ell = 1;
  rec->d_witness = {5, 8, 15};  // columns 6, 9, 16
  rec->zero_triple = {5, 8, 15};
  rec->partitions.push_back(explicit_claim("pok", 3, 1, ok_partition()));
  rec->partitions.push_back(
      explicit_claim("trivial", 3, 1, Partition::trivial(rec->n())));
  rec->provenance = {{"seed", "ok"}, {"source", "Ostergard-Kaikkonen [18,9] code"}};
  rec->check_invariants();
  return rec;
}

std::shared_ptr<CodeRecord> ok2_code() {
  auto rec = std::make_shared<CodeRecord>();
  rec->name = "ok2";
  rec->H = with_identity_prefix(*from_tokens(11, kOk2Tokens));
  rec->claimed_R = 4;
  rec->claimed_d = 3;
  rec->claimed_ell = 1;
  rec->d_witness = {8, 9, 13};  // columns 9, 10, 14
  rec->zero_triple = {8, 9, 13};
  rec->star_eligible = true;  // trivial partition: all subsets singletons
  rec->partitions.push_back(
      explicit_claim("trivial", 4, 1, Partition::trivial(rec->n())));
  rec->provenance = {{"seed", "ok2"}, {"source", "Ostergard-Kaikkonen [19,8] code"}};
  rec->check_invariants();
  return rec;
}

std::shared_ptr<CodeRecord> golay_code() {
  // Quadratic-residue realization of the [23,12,7] code: column i of H is
  // x^i mod g(x), g(x) = x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1, so the
  // matrix starts with I_11. Coefficient j maps to row j.
  const uint32_t g = 0xC75;
  auto h = std::make_shared<DenseMatrix>(11, 23);
  uint32_t rem = 1;  // x^0
  for (int i = 0; i < 23; ++i) {
    h->append_u64(rem & 0x7FF);
    rem <<= 1;
    if (rem & 0x800) rem ^= g;
  }
  auto rec = std::make_shared<CodeRecord>();
  rec->name = "golay";
  rec->H = h;
  rec->claimed_R = 3;
  rec->claimed_d = 7;
  rec->claimed_ell = 0;
  rec->partitions.push_back(
      explicit_claim("trivial", 3, 0, Partition::trivial(23)));
  rec->provenance = {{"seed", "golay"},
                     {"source", "binary Golay [23,12,7] code, QR form"},
                     {"generator_poly", g}};
  rec->check_invariants();
  return rec;
}

std::shared_ptr<CodeRecord> hamming_code(int m) {
  auto rec = std::make_shared<CodeRecord>();
  rec->name = "hamming-" + std::to_string(m);
  rec->H = hamming_matrix(m);
  rec->claimed_R = 1;
  rec->claimed_d = m >= 2 ? 3 : 1;
  rec->claimed_ell = 0;  // d = 3 > R = 1, so ell stays 0
  if (m >= 2) {
    rec->d_witness = {0, 1, 2};  // values 1, 2, 3
    rec->zero_triple = {0, 1, 2};
  }
  rec->partitions.push_back(
      explicit_claim("trivial", 1, 0, Partition::trivial(rec->n())));
  rec->provenance = {{"seed", rec->name}, {"source", "Hamming code"}};
  rec->check_invariants();
  return rec;
}

std::vector<std::string> seed_names() {
  return {"kr", "ok", "ok2", "golay", "hamming-3", "hamming-4"};
}

std::shared_ptr<CodeRecord> make_seed(const std::string& name) {
  if (name == "kr") return kr_code();
  if (name == "ok") return ok_code();
  if (name == "ok2") return ok2_code();
  if (name == "golay") return golay_code();
  if (name.rfind("hamming-", 0) == 0) {
    int m = std::stoi(name.substr(8));
    return hamming_code(m);
  }
  throw std::runtime_error("unknown seed: " + name);
}

std::shared_ptr<CodeRecord> import_external(const std::string& name,
                                            const std::string& matrix_text,
                                            int claimed_R, int claimed_d,
                                            int claimed_ell,
                                            const std::string& partition_text,
                                            int partition_R, int partition_ell) {
  auto rec = std::make_shared<CodeRecord>();
  rec->name = name;
  rec->H = parse_hex_matrix(matrix_text);
  rec->claimed_R = claimed_R;
  rec->claimed_d = claimed_d;
  rec->claimed_ell = claimed_ell;
  if (!partition_text.empty()) {
    Partition p = Partition::parse(partition_text);
    p.validate(rec->n());
    rec->partitions.push_back(
        explicit_claim("imported", partition_R, partition_ell, std::move(p)));
  }
  rec->provenance = {{"seed", name}, {"source", "external import"}};
  rec->check_invariants();
  return rec;
}

}  // namespace covcode
