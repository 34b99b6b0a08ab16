#include "covcode/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace covcode {

DenseMatrix::DenseMatrix(uint32_t rows, uint64_t cols_hint)
    : rows_(rows), wpc_(BitColumn::word_count(rows)) {
  if (rows == 0) throw std::invalid_argument("matrix: rows must be >= 1");
  if (cols_hint) data_.reserve(cols_hint * wpc_);
}

BitColumn DenseMatrix::column(uint64_t idx) const {
  if (idx >= n_) throw std::out_of_range("matrix: column index");
  BitColumn c(rows_);
  for (uint32_t w = 0; w < wpc_; ++w) c.word_data()[w] = data_[idx * wpc_ + w];
  return c;
}

void DenseMatrix::append(const BitColumn& c) {
  if (c.rows() != rows_) throw std::invalid_argument("matrix: column height mismatch");
  for (uint32_t w = 0; w < wpc_; ++w) data_.push_back(c.words()[w]);
  ++n_;
}

void DenseMatrix::append_u64(uint64_t low_word) {
  data_.push_back(low_word);
  for (uint32_t w = 1; w < wpc_; ++w) data_.push_back(0);
  ++n_;
}

std::vector<uint64_t> materialize_u64(const ColumnSource& m) {
  if (m.rows() > 64)
    throw std::invalid_argument("matrix: dense verification needs r <= 64");
  std::vector<uint64_t> cols(m.cols());
  if (m.is_dense()) {
    const auto& dm = static_cast<const DenseMatrix&>(m);
    if (dm.words_per_col() == 1) return dm.data();
  }
  for (uint64_t j = 0; j < m.cols(); ++j) cols[j] = m.column_u64(j);
  return cols;
}

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

BitColumn column_from_hex_token(const std::string& token, uint32_t rows) {
  if (token.empty()) throw std::runtime_error("hex: empty token");
  // token value bit b is row (r-1-b)
  BitColumn c(rows);
  for (size_t k = 0; k < token.size(); ++k) {
    int d = hex_digit(token[k]);
    if (d < 0) throw std::runtime_error("hex: bad digit in token '" + token + "'");
    for (int b = 0; b < 4; ++b) {
      if (!((d >> b) & 1)) continue;
      uint32_t bit = uint32_t(token.size() - 1 - k) * 4 + uint32_t(b);
      if (bit >= rows)
        throw std::runtime_error("hex: token '" + token + "' exceeds 2^r");
      c.set(rows - 1 - bit, true);
    }
  }
  return c;
}

std::string column_hex_token(const BitColumn& c) {
  uint32_t r = c.rows();
  int nibbles = int((r + 3) / 4);
  std::string out;
  bool leading = true;
  for (int k = nibbles - 1; k >= 0; --k) {
    int d = 0;
    for (int b = 3; b >= 0; --b) {
      uint32_t bit = uint32_t(k) * 4 + uint32_t(b);
      if (bit < r && c.get(r - 1 - bit)) d |= 1 << b;
    }
    if (d == 0 && leading && k > 0) continue;
    leading = false;
    out += "0123456789ABCDEF"[d];
  }
  return out;
}

std::shared_ptr<DenseMatrix> parse_hex_matrix(const std::string& text) {
  std::istringstream in(text);
  uint32_t r = 0;
  uint64_t n = 0;
  if (!(in >> r >> n)) throw std::runtime_error("hex: missing 'r n' header");
  if (r == 0 || n == 0) throw std::runtime_error("hex: r and n must be >= 1");
  auto m = std::make_shared<DenseMatrix>(r, n);
  std::string tok;
  for (uint64_t j = 0; j < n; ++j) {
    if (!(in >> tok))
      throw std::runtime_error("hex: expected " + std::to_string(n) +
                               " tokens, got " + std::to_string(j));
    m->append(column_from_hex_token(tok, r));
  }
  if (in >> tok) throw std::runtime_error("hex: trailing tokens after column " +
                                          std::to_string(n));
  return m;
}

std::string emit_hex_matrix(const ColumnSource& m) {
  std::ostringstream out;
  out << m.rows() << ' ' << m.cols() << '\n';
  for (uint64_t j = 0; j < m.cols(); ++j) {
    if (j) out << ' ';
    out << column_hex_token(m.column(j));
  }
  out << '\n';
  return out.str();
}

std::string emit_hex_tokens(const ColumnSource& m, uint64_t skip_cols) {
  std::ostringstream out;
  for (uint64_t j = skip_cols; j < m.cols(); ++j) {
    if (j > skip_cols) out << ',';
    out << column_hex_token(m.column(j));
  }
  return out.str();
}

std::shared_ptr<DenseMatrix> with_identity_prefix(const ColumnSource& m) {
  uint32_t r = m.rows();
  auto out = std::make_shared<DenseMatrix>(r, r + m.cols());
  for (uint32_t i = 0; i < r; ++i) {
    BitColumn e(r);
    e.set(i, true);
    out->append(e);
  }
  for (uint64_t j = 0; j < m.cols(); ++j) out->append(m.column(j));
  return out;
}

}  // namespace covcode
