#include "necorpia/gf2.hpp"

namespace necorpia::gf2 {

BinaryMatrix mat_mul(const BinaryMatrix& a, const BinaryMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: inner dimension mismatch");
  BinaryMatrix c(a.rows(), b.cols());
  const uint32_t awpr = a.words_per_row();
  const uint32_t cwpr = c.words_per_row();
  const int64_t n = a.rows();
#pragma omp parallel for schedule(static) if (n >= 256 && b.cols() >= 512)
  for (int64_t i = 0; i < n; ++i) {
    const uint32_t r = static_cast<uint32_t>(i);
    for (uint32_t k = 0; k < awpr; ++k) {
      uint64_t w = a.word(r, k);
      while (w) {
        const uint32_t bit = static_cast<uint32_t>(__builtin_ctzll(w));
        w &= w - 1;
        const uint32_t src = k * kWordBits + bit;
        for (uint32_t j = 0; j < cwpr; ++j) c.word(r, j) ^= b.word(src, j);
      }
    }
  }
  return c;
}

namespace {

// Forward elimination only; cheaper than full RREF when just the rank is
// needed.
uint32_t eliminate(BinaryMatrix& m) {
  const uint32_t rows = m.rows();
  const uint32_t cols = m.cols();
  uint32_t r = 0;
  for (uint32_t c = 0; c < cols && r < rows; ++c) {
    uint32_t pivot = rows;
    for (uint32_t i = r; i < rows; ++i) {
      if (m.get(i, c)) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    m.swap_rows(r, pivot);
    for (uint32_t i = r + 1; i < rows; ++i)
      if (m.get(i, c)) m.xor_rows(i, r);
    ++r;
  }
  return r;
}

}  // namespace

uint32_t rank(const BinaryMatrix& m) {
  BinaryMatrix copy = m;
  return eliminate(copy);
}

std::vector<uint32_t> rref_in_place(BinaryMatrix& m) {
  BinaryMatrix unused;
  const uint32_t rows = m.rows();
  const uint32_t cols = m.cols();
  std::vector<uint32_t> pivots;
  uint32_t r = 0;
  for (uint32_t c = 0; c < cols && r < rows; ++c) {
    uint32_t pivot = rows;
    for (uint32_t i = r; i < rows; ++i) {
      if (m.get(i, c)) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    m.swap_rows(r, pivot);
    for (uint32_t i = 0; i < rows; ++i)
      if (i != r && m.get(i, c)) m.xor_rows(i, r);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<uint32_t> rref_in_place_with_transform(BinaryMatrix& m, BinaryMatrix& t) {
  const uint32_t rows = m.rows();
  const uint32_t cols = m.cols();
  t = BinaryMatrix::identity(rows);
  std::vector<uint32_t> pivots;
  uint32_t r = 0;
  for (uint32_t c = 0; c < cols && r < rows; ++c) {
    uint32_t pivot = rows;
    for (uint32_t i = r; i < rows; ++i) {
      if (m.get(i, c)) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    m.swap_rows(r, pivot);
    t.swap_rows(r, pivot);
    for (uint32_t i = 0; i < rows; ++i) {
      if (i != r && m.get(i, c)) {
        m.xor_rows(i, r);
        t.xor_rows(i, r);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

BinaryMatrix select_full_rank_rows(const BinaryMatrix& m, uint32_t g,
                                   std::vector<uint32_t>* row_indices) {
  // Incremental basis keyed by pivot column; a row is kept iff it is
  // independent of the rows kept so far.
  std::vector<BitVec> basis;
  std::vector<uint32_t> basis_pivot;
  std::vector<uint32_t> selected;
  for (uint32_t r = 0; r < m.rows() && selected.size() < g; ++r) {
    BitVec v = m.row(r);
    for (size_t i = 0; i < basis.size(); ++i)
      if (v.get(basis_pivot[i])) v.xor_with(basis[i]);
    auto lead = v.first_set_bit();
    if (!lead) continue;
    basis.push_back(std::move(v));
    basis_pivot.push_back(*lead);
    selected.push_back(r);
  }
  if (selected.size() < g)
    throw InsufficientRankError("select_full_rank_rows: rank below requested g");
  BinaryMatrix out(g, m.cols());
  for (uint32_t i = 0; i < g; ++i)
    for (uint32_t k = 0; k < m.words_per_row(); ++k) out.word(i, k) = m.word(selected[i], k);
  if (row_indices) *row_indices = std::move(selected);
  return out;
}

}  // namespace necorpia::gf2
