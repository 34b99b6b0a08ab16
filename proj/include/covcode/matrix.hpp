#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace covcode {

// An r-bit binary column. Bit index 0 is the top row. Columns wider than
// 64 rows (chain artifacts) use a second word.
class BitColumn {
 public:
  BitColumn() = default;
  explicit BitColumn(uint32_t rows) : rows_(rows), words_(word_count(rows), 0) {}
  BitColumn(uint32_t rows, uint64_t low_word) : BitColumn(rows) {
    words_[0] = low_word;
  }

  static uint32_t word_count(uint32_t rows) { return rows ? (rows + 63) / 64 : 1; }

  uint32_t rows() const { return rows_; }
  bool get(uint32_t row) const { return (words_[row >> 6] >> (row & 63)) & 1; }
  void set(uint32_t row, bool v) {
    uint64_t mask = uint64_t(1) << (row & 63);
    if (v)
      words_[row >> 6] |= mask;
    else
      words_[row >> 6] &= ~mask;
  }

  // Writes an m-bit field value into rows [offset, offset+m).
  void put_bits(uint32_t offset, uint32_t m, uint32_t value) {
    for (uint32_t i = 0; i < m; ++i) set(offset + i, (value >> i) & 1);
  }
  uint32_t get_bits(uint32_t offset, uint32_t m) const {
    uint32_t v = 0;
    for (uint32_t i = 0; i < m; ++i) v |= uint32_t(get(offset + i)) << i;
    return v;
  }

  uint64_t low64() const { return words_[0]; }
  const std::vector<uint64_t>& words() const { return words_; }
  uint64_t* word_data() { return words_.data(); }

  void operator^=(const BitColumn& o) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  }
  bool is_zero() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }
  bool operator==(const BitColumn& o) const {
    return rows_ == o.rows_ && words_ == o.words_;
  }

 private:
  uint32_t rows_ = 0;
  std::vector<uint64_t> words_{0};
};

// Read access to the columns of an r x n parity check matrix. Constructions
// at large r are exposed virtually (columns computed on demand) because the
// family chains reach lengths that cannot be materialized.
class ColumnSource {
 public:
  virtual ~ColumnSource() = default;
  virtual uint32_t rows() const = 0;
  virtual uint64_t cols() const = 0;
  virtual BitColumn column(uint64_t idx) const = 0;

  // Low 64 bits of a column; exact when rows() <= 64.
  virtual uint64_t column_u64(uint64_t idx) const { return column(idx).low64(); }
  virtual bool is_dense() const { return false; }
};

// Column-major packed storage.
class DenseMatrix : public ColumnSource {
 public:
  DenseMatrix(uint32_t rows, uint64_t cols_hint = 0);

  uint32_t rows() const override { return rows_; }
  uint64_t cols() const override { return n_; }
  BitColumn column(uint64_t idx) const override;
  uint64_t column_u64(uint64_t idx) const override { return data_[idx * wpc_]; }
  bool is_dense() const override { return true; }

  void append(const BitColumn& c);
  void append_u64(uint64_t low_word);

  uint32_t words_per_col() const { return wpc_; }
  const std::vector<uint64_t>& data() const { return data_; }

 private:
  uint32_t rows_ = 0;
  uint32_t wpc_ = 1;
  uint64_t n_ = 0;
  std::vector<uint64_t> data_;
};

using MatrixPtr = std::shared_ptr<const ColumnSource>;

// Flattens every column's low word into one array; requires rows() <= 64.
std::vector<uint64_t> materialize_u64(const ColumnSource& m);

// Hex interchange format: header "r n", then n whitespace-separated
// uppercase hex tokens; bit (r-1-i) of a token is row i (top row is the
// most significant bit).
std::shared_ptr<DenseMatrix> parse_hex_matrix(const std::string& text);
std::string emit_hex_matrix(const ColumnSource& m);
std::string column_hex_token(const BitColumn& c);
BitColumn column_from_hex_token(const std::string& token, uint32_t rows);

// Comma-separated token list without the header (publication style).
std::string emit_hex_tokens(const ColumnSource& m, uint64_t skip_cols = 0);

// [I_r | M]: unit columns e_1..e_r first, leftmost (10...0)^tr.
std::shared_ptr<DenseMatrix> with_identity_prefix(const ColumnSource& m);

}  // namespace covcode
