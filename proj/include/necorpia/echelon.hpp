#ifndef NECORPIA_ECHELON_HPP
#define NECORPIA_ECHELON_HPP

#include <cstdint>
#include <vector>

#include "necorpia/gf2.hpp"

namespace necorpia::gf2 {

/// Block-structured reduced row echelon form of a received matrix.
///
/// Columns are partitioned into n_v header segments of widths L_1..L_nv plus
/// a payload segment of width L_p; rows of the RREF are grouped by the
/// segment their pivot falls in. Group i stores header blocks b(i,l) for
/// l = i..n_v-1 and payload block c(i); the last group has only c(n_v).
/// Blocks are stored re-aligned to bit 0 so row operations on them are
/// plain word XORs.
struct EchelonDecomposition {
  std::vector<uint32_t> widths;  // L_1..L_nv, L_p
  std::vector<uint32_t> ranks;   // rho_1..rho_{nv+1}

  // b_blocks[i][l - i] is the block of row group i under header segment l,
  // for 0 <= i <= l < n_blocks()-1. c_blocks[i] is group i's payload block.
  std::vector<std::vector<BinaryMatrix>> b_blocks;
  std::vector<BinaryMatrix> c_blocks;

  // Pivot columns of each diagonal block, local to its segment, ascending.
  std::vector<std::vector<uint32_t>> pivot_cols;

  uint32_t n_blocks() const { return static_cast<uint32_t>(widths.size()); }
  uint32_t n_header_blocks() const { return n_blocks() - 1; }

  uint32_t total_rank() const {
    uint32_t s = 0;
    for (uint32_t r : ranks) s += r;
    return s;
  }

  const BinaryMatrix& b(uint32_t i, uint32_t l) const { return b_blocks[i][l - i]; }
  const BinaryMatrix& c(uint32_t i) const { return c_blocks[i]; }
  const BinaryMatrix& diag(uint32_t l) const { return b_blocks[l][0]; }

  /// Stacks the block grid back into a rank() x total-width matrix.
  BinaryMatrix reassemble() const;
};

/// Computes the echelon decomposition of y under the given column widths
/// (which must sum to y.cols()). Zero rows of the RREF are dropped. When
/// `transform` is non-null it receives the row transform T with T*y row
/// equal to the reassembled blocks on the first rank(y) rows.
EchelonDecomposition block_rref(const BinaryMatrix& y, const std::vector<uint32_t>& widths,
                                BinaryMatrix* transform = nullptr);

}  // namespace necorpia::gf2

#endif
