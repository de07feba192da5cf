#include "necorpia/echelon.hpp"

#include <numeric>

namespace necorpia::gf2 {

BinaryMatrix EchelonDecomposition::reassemble() const {
  const uint32_t total_cols = std::accumulate(widths.begin(), widths.end(), 0u);
  BinaryMatrix out(total_rank(), total_cols);
  const uint32_t nv = n_header_blocks();
  uint32_t row0 = 0;
  for (uint32_t i = 0; i < n_blocks(); ++i) {
    uint32_t col0 = 0;
    for (uint32_t l = 0; l < nv; ++l) {
      if (l >= i) {
        const BinaryMatrix& blk = b(i, l);
        for (uint32_t r = 0; r < blk.rows(); ++r)
          for (uint32_t c = 0; c < blk.cols(); ++c)
            if (blk.get(r, c)) out.set(row0 + r, col0 + c, true);
      }
      col0 += widths[l];
    }
    const BinaryMatrix& pay = c_blocks[i];
    for (uint32_t r = 0; r < pay.rows(); ++r)
      for (uint32_t c = 0; c < pay.cols(); ++c)
        if (pay.get(r, c)) out.set(row0 + r, col0 + c, true);
    row0 += ranks[i];
  }
  return out;
}

EchelonDecomposition block_rref(const BinaryMatrix& y, const std::vector<uint32_t>& widths,
                                BinaryMatrix* transform) {
  if (widths.empty()) throw std::invalid_argument("block_rref: no widths");
  const uint32_t total = std::accumulate(widths.begin(), widths.end(), 0u);
  if (total != y.cols()) throw std::invalid_argument("block_rref: widths do not sum to cols");

  BinaryMatrix r = y;
  std::vector<uint32_t> pivots;
  if (transform)
    pivots = rref_in_place_with_transform(r, *transform);
  else
    pivots = rref_in_place(r);

  const uint32_t nv = static_cast<uint32_t>(widths.size()) - 1;

  std::vector<uint32_t> seg_start(widths.size() + 1, 0);
  for (size_t i = 0; i < widths.size(); ++i) seg_start[i + 1] = seg_start[i] + widths[i];

  EchelonDecomposition d;
  d.widths = widths;
  d.ranks.assign(widths.size(), 0);
  d.pivot_cols.assign(widths.size(), {});

  // RREF pivots are strictly increasing, so rows grouped by pivot segment
  // are contiguous.
  std::vector<uint32_t> group_row_start(widths.size() + 1, 0);
  {
    uint32_t seg = 0;
    for (uint32_t i = 0; i < pivots.size(); ++i) {
      while (pivots[i] >= seg_start[seg + 1]) {
        ++seg;
        group_row_start[seg] = i;
      }
      d.ranks[seg]++;
      d.pivot_cols[seg].push_back(pivots[i] - seg_start[seg]);
    }
    for (uint32_t s = seg + 1; s <= widths.size(); ++s)
      group_row_start[s] = static_cast<uint32_t>(pivots.size());
  }

  d.b_blocks.resize(nv);
  for (uint32_t i = 0; i < nv; ++i) {
    d.b_blocks[i].reserve(nv - i);
    for (uint32_t l = i; l < nv; ++l)
      d.b_blocks[i].push_back(
          r.submatrix(group_row_start[i], d.ranks[i], seg_start[l], widths[l]));
  }
  d.c_blocks.reserve(widths.size());
  for (uint32_t i = 0; i < widths.size(); ++i)
    d.c_blocks.push_back(r.submatrix(group_row_start[i], d.ranks[i], seg_start[nv], widths[nv]));
  return d;
}

}  // namespace necorpia::gf2
