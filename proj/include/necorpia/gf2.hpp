#ifndef NECORPIA_GF2_HPP
#define NECORPIA_GF2_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "necorpia/rng.hpp"

namespace necorpia::gf2 {

/// Raised when an operation needs more linearly independent rows than the
/// input provides.
struct InsufficientRankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr uint32_t kWordBits = 64;

inline uint32_t words_for(uint32_t bits) { return (bits + kWordBits - 1) / kWordBits; }

/// Bit-packed vector over GF(2). Bit i lives in word i/64 at position i%64;
/// bits past size() in the last word are kept zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(uint32_t n) : n_(n), w_(words_for(n), 0) {}

  static BitVec canonical(uint32_t n, uint32_t index) {
    BitVec v(n);
    v.set(index, true);
    return v;
  }

  static BitVec random(uint32_t n, Rng& rng) {
    BitVec v(n);
    for (auto& w : v.w_) w = rng.next_u64();
    v.clear_tail();
    return v;
  }

  uint32_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(uint32_t i) const { return (w_[i / kWordBits] >> (i % kWordBits)) & 1u; }

  void set(uint32_t i, bool v) {
    const uint64_t mask = uint64_t{1} << (i % kWordBits);
    if (v)
      w_[i / kWordBits] |= mask;
    else
      w_[i / kWordBits] &= ~mask;
  }

  void xor_with(const BitVec& other) {
    if (other.n_ != n_) throw std::invalid_argument("BitVec::xor_with: size mismatch");
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= other.w_[i];
  }

  uint32_t popcount() const {
    uint32_t c = 0;
    for (uint64_t w : w_) c += static_cast<uint32_t>(__builtin_popcountll(w));
    return c;
  }

  bool is_zero() const {
    for (uint64_t w : w_)
      if (w) return false;
    return true;
  }

  /// Index of the single set bit, or nullopt unless popcount() == 1.
  std::optional<uint32_t> single_bit() const {
    std::optional<uint32_t> found;
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t w = w_[i];
      if (!w) continue;
      if (found || (w & (w - 1))) return std::nullopt;
      found = static_cast<uint32_t>(i) * kWordBits + static_cast<uint32_t>(__builtin_ctzll(w));
    }
    return found;
  }

  std::optional<uint32_t> first_set_bit() const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i])
        return static_cast<uint32_t>(i) * kWordBits +
               static_cast<uint32_t>(__builtin_ctzll(w_[i]));
    return std::nullopt;
  }

  BitVec subvec(uint32_t start, uint32_t len) const {
    BitVec out(len);
    for (uint32_t i = 0; i < len; ++i) out.set(i, get(start + i));
    return out;
  }

  /// Writes `src` into this vector starting at bit `start`.
  void splice(uint32_t start, const BitVec& src) {
    for (uint32_t i = 0; i < src.size(); ++i) set(start + i, src.get(i));
  }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  friend bool operator!=(const BitVec& a, const BitVec& b) { return !(a == b); }
  friend bool operator<(const BitVec& a, const BitVec& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.w_ < b.w_;
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (uint32_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  /// Canonical byte form: bit i goes to byte i/8, mask 0x80 >> (i%8).
  std::vector<uint8_t> to_bytes() const {
    std::vector<uint8_t> out((n_ + 7) / 8, 0);
    for (uint32_t i = 0; i < n_; ++i)
      if (get(i)) out[i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
    return out;
  }

  static BitVec from_bytes(const std::vector<uint8_t>& bytes, uint32_t n) {
    if (bytes.size() != (n + 7u) / 8u)
      throw std::invalid_argument("BitVec::from_bytes: length mismatch");
    BitVec v(n);
    for (uint32_t i = 0; i < n; ++i)
      if (bytes[i / 8] & (0x80u >> (i % 8))) v.set(i, true);
    return v;
  }

  const std::vector<uint64_t>& words() const { return w_; }
  std::vector<uint64_t>& words() { return w_; }

  void clear_tail() {
    const uint32_t rem = n_ % kWordBits;
    if (rem && !w_.empty()) w_.back() &= (uint64_t{1} << rem) - 1;
  }

 private:
  uint32_t n_ = 0;
  std::vector<uint64_t> w_;
};

/// Bit-packed row-major matrix over GF(2). A 0xN or Nx0 matrix is valid.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(uint32_t rows, uint32_t cols)
      : rows_(rows), cols_(cols), wpr_(words_for(cols)), w_(size_t{rows} * wpr_, 0) {}

  static BinaryMatrix identity(uint32_t n) {
    BinaryMatrix m(n, n);
    for (uint32_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static BinaryMatrix random(uint32_t rows, uint32_t cols, Rng& rng) {
    BinaryMatrix m(rows, cols);
    for (uint32_t r = 0; r < rows; ++r) {
      for (uint32_t k = 0; k < m.wpr_; ++k) m.word(r, k) = rng.next_u64();
      m.clear_row_tail(r);
    }
    return m;
  }

  static BinaryMatrix from_rows(const std::vector<BitVec>& rows) {
    const uint32_t cols = rows.empty() ? 0 : rows.front().size();
    BinaryMatrix m(static_cast<uint32_t>(rows.size()), cols);
    for (uint32_t r = 0; r < m.rows_; ++r) m.set_row(r, rows[r]);
    return m;
  }

  /// Rows given as strings of '0'/'1'; handy for fixtures.
  static BinaryMatrix parse(const std::vector<std::string>& rows) {
    const uint32_t cols = rows.empty() ? 0 : static_cast<uint32_t>(rows.front().size());
    BinaryMatrix m(static_cast<uint32_t>(rows.size()), cols);
    for (uint32_t r = 0; r < m.rows_; ++r) {
      if (rows[r].size() != cols) throw std::invalid_argument("ragged rows");
      for (uint32_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c] == '1');
    }
    return m;
  }

  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }

  bool get(uint32_t r, uint32_t c) const {
    return (word(r, c / kWordBits) >> (c % kWordBits)) & 1u;
  }

  void set(uint32_t r, uint32_t c, bool v) {
    const uint64_t mask = uint64_t{1} << (c % kWordBits);
    if (v)
      word(r, c / kWordBits) |= mask;
    else
      word(r, c / kWordBits) &= ~mask;
  }

  BitVec row(uint32_t r) const {
    BitVec v(cols_);
    for (uint32_t k = 0; k < wpr_; ++k) v.words()[k] = word(r, k);
    return v;
  }

  void set_row(uint32_t r, const BitVec& v) {
    if (v.size() != cols_) throw std::invalid_argument("BinaryMatrix::set_row: size mismatch");
    for (uint32_t k = 0; k < wpr_; ++k) word(r, k) = v.words()[k];
  }

  void xor_row_into(uint32_t src, BitVec& dst) const {
    for (uint32_t k = 0; k < wpr_; ++k) dst.words()[k] ^= word(src, k);
  }

  void xor_rows(uint32_t dst, uint32_t src) {
    for (uint32_t k = 0; k < wpr_; ++k) word(dst, k) ^= word(src, k);
  }

  void swap_rows(uint32_t a, uint32_t b) {
    if (a == b) return;
    for (uint32_t k = 0; k < wpr_; ++k) std::swap(word(a, k), word(b, k));
  }

  /// True iff row `r` XOR `v` has exactly one set bit; that bit's index is
  /// stored in `index`. Single fused pass, used by the decoder's row scans.
  bool row_xor_is_canonical(uint32_t r, const BitVec& v, uint32_t& index) const {
    std::optional<uint32_t> found;
    for (uint32_t k = 0; k < wpr_; ++k) {
      uint64_t w = word(r, k) ^ v.words()[k];
      if (!w) continue;
      if (found || (w & (w - 1))) return false;
      found = k * kWordBits + static_cast<uint32_t>(__builtin_ctzll(w));
    }
    if (!found) return false;
    index = *found;
    return true;
  }

  bool row_equals(uint32_t r, const BitVec& v) const {
    for (uint32_t k = 0; k < wpr_; ++k)
      if (word(r, k) != v.words()[k]) return false;
    return true;
  }

  BinaryMatrix submatrix(uint32_t r0, uint32_t nrows, uint32_t c0, uint32_t ncols) const {
    BinaryMatrix m(nrows, ncols);
    for (uint32_t r = 0; r < nrows; ++r)
      for (uint32_t c = 0; c < ncols; ++c)
        if (get(r0 + r, c0 + c)) m.set(r, c, true);
    return m;
  }

  BinaryMatrix transposed() const {
    BinaryMatrix m(cols_, rows_);
    for (uint32_t r = 0; r < rows_; ++r)
      for (uint32_t c = 0; c < cols_; ++c)
        if (get(r, c)) m.set(c, r, true);
    return m;
  }

  /// Stacks `other` below this matrix (column counts must agree).
  BinaryMatrix vstack(const BinaryMatrix& other) const {
    if (other.cols_ != cols_ && other.rows_ != 0 && rows_ != 0)
      throw std::invalid_argument("vstack: column mismatch");
    BinaryMatrix m(rows_ + other.rows_, rows_ ? cols_ : other.cols_);
    for (uint32_t r = 0; r < rows_; ++r)
      for (uint32_t k = 0; k < wpr_; ++k) m.word(r, k) = word(r, k);
    for (uint32_t r = 0; r < other.rows_; ++r)
      for (uint32_t k = 0; k < other.wpr_; ++k) m.word(rows_ + r, k) = other.word(r, k);
    return m;
  }

  friend bool operator==(const BinaryMatrix& a, const BinaryMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.w_ == b.w_;
  }

  /// ASCII 0/1 grid, one row per line.
  std::string to_string() const {
    std::string s;
    s.reserve(size_t{rows_} * (cols_ + 1));
    for (uint32_t r = 0; r < rows_; ++r) {
      for (uint32_t c = 0; c < cols_; ++c) s.push_back(get(r, c) ? '1' : '0');
      s.push_back('\n');
    }
    return s;
  }

  uint64_t& word(uint32_t r, uint32_t k) { return w_[size_t{r} * wpr_ + k]; }
  const uint64_t& word(uint32_t r, uint32_t k) const { return w_[size_t{r} * wpr_ + k]; }
  uint32_t words_per_row() const { return wpr_; }

 private:
  void clear_row_tail(uint32_t r) {
    const uint32_t rem = cols_ % kWordBits;
    if (rem && wpr_) word(r, wpr_ - 1) &= (uint64_t{1} << rem) - 1;
  }

  uint32_t rows_ = 0;
  uint32_t cols_ = 0;
  uint32_t wpr_ = 0;
  std::vector<uint64_t> w_;
};

/// GF(2) product a*b; requires a.cols == b.rows.
BinaryMatrix mat_mul(const BinaryMatrix& a, const BinaryMatrix& b);

/// Row rank over GF(2).
uint32_t rank(const BinaryMatrix& m);

/// In-place reduced row echelon form; returns the pivot columns in order.
std::vector<uint32_t> rref_in_place(BinaryMatrix& m);

/// RREF that also accumulates the row transform: on return t * input == m.
std::vector<uint32_t> rref_in_place_with_transform(BinaryMatrix& m, BinaryMatrix& t);

/// First g rows of `m` that are linearly independent, scanned top to bottom.
/// Throws InsufficientRankError if rank(m) < g.
BinaryMatrix select_full_rank_rows(const BinaryMatrix& m, uint32_t g,
                                   std::vector<uint32_t>* row_indices = nullptr);

}  // namespace necorpia::gf2

#endif
