#pragma once

#include <memory>
#include <string>
#include <vector>

#include "covcode/record.hpp"

namespace covcode {

// Built-in seed codes and their published partitions, bit-exact.

// Parity check m x (2^m - 1) matrix of the Hamming code: all nonzero m-bit
// values in ascending order. exclude_w > 0 drops that column value.
std::shared_ptr<DenseMatrix> hamming_matrix(int m, uint32_t exclude_w = 0);

std::shared_ptr<CodeRecord> kr_code();      // [51,41]_2 R=2, d=3
std::shared_ptr<CodeRecord> ok_code();      // [18,9]_2  R=3, d=3
std::shared_ptr<CodeRecord> ok2_code();     // [19,8]_2  R=4, d=3
std::shared_ptr<CodeRecord> golay_code();   // [23,12,7] R=3
std::shared_ptr<CodeRecord> hamming_code(int m);  // perfect R=1

// The 11-subset 2-partition of the KR matrix and its 16-subset refinement
// with the dependent columns 5, 27, 29 isolated as singletons.
Partition kr_partition();
Partition kr_partition_star();
Partition ok_partition();  // 11-subset (3,1)-partition

std::vector<std::string> seed_names();
std::shared_ptr<CodeRecord> make_seed(const std::string& name);

// Registers a user-supplied matrix (hex format) with claims; the record
// stays "unverified" until the verifier runs.
std::shared_ptr<CodeRecord> import_external(const std::string& name,
                                            const std::string& matrix_text,
                                            int claimed_R, int claimed_d,
                                            int claimed_ell,
                                            const std::string& partition_text,
                                            int partition_R, int partition_ell);

}  // namespace covcode
