#ifndef NECORPIA_DECODER_HPP
#define NECORPIA_DECODER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "necorpia/echelon.hpp"
#include "necorpia/gf2.hpp"
#include "necorpia/packet.hpp"

namespace necorpia {

enum class DecodeVariant { Sle, Lut };

/// Candidate unmixing row vector w = (w_1, ..., w_{nv+1}); part l has
/// length rho_l and the concatenation has length g.
struct UnmixingVector {
  std::vector<gf2::BitVec> parts;

  gf2::BitVec concat() const {
    uint32_t n = 0;
    for (const auto& p : parts) n += p.size();
    gf2::BitVec out(n);
    uint32_t off = 0;
    for (const auto& p : parts) {
      out.splice(off, p);
      off += p.size();
    }
    return out;
  }
};

/// Per-level tables of the LUT decoder: for each diagonal block, the pivot
/// column gamma(u) of every row, the set Pi of de-pivoted rows, and for each
/// member of Pi the rows (canonical w_l candidates) that de-pivot to it.
struct LookupTables {
  struct Level {
    std::vector<uint32_t> pivot_col;
    std::vector<gf2::BitVec> depivoted;          // Pi_l, in insertion order
    std::vector<std::vector<uint32_t>> row_sets;  // parallel to depivoted
  };
  std::vector<Level> levels;
};

struct DecodeStats {
  // Surviving partial vectors per tree level; the last entry counts the
  // terminal candidates examined (hash checks performed).
  std::vector<uint64_t> branches_per_level;
  uint64_t terminal_candidates = 0;  // accepted unmixing vectors, n_w
  // Symbol-level GF(2) operation count of the collision-resolution stage
  // (tree traversal, and table construction for the LUT variant). The
  // initial RREF and the fast-path elimination are not included; they are
  // common to plain network decoding and modelled by the K_R g^2 L_x term.
  uint64_t gf2_ops = 0;
  bool used_fast_path = false;
};

struct DecodeResult {
  std::vector<SourcePacket> recovered;
  std::vector<UnmixingVector> unmixing_vectors;
  DecodeStats stats;
};

/// Fast path: when some header column block of the received matrix has full
/// rank g (every source drew a distinct index in that block), plain Gaussian
/// elimination on that block recovers all packets. Returns nullopt when no
/// block qualifies.
std::optional<DecodeResult> try_gaussian(const gf2::EchelonDecomposition& decomp,
                                         const HeaderConfig& cfg);

struct LevelCandidate {
  gf2::BitVec w;       // length rho_l; zero or canonical
  uint32_t index = 0;  // j_l, 1-based
};

/// All (w_l, j_l) satisfying the level-l constraint given a prefix
/// satisfying levels 1..l-1, by direct row scan of the diagonal block.
/// An empty result prunes the branch. Levels are 0-based here.
std::vector<LevelCandidate> solve_level_sle(const std::vector<gf2::BitVec>& prefix,
                                            const gf2::EchelonDecomposition& decomp,
                                            uint32_t level, uint64_t* ops = nullptr);

LookupTables build_tables(const gf2::EchelonDecomposition& decomp, uint64_t* ops = nullptr);

/// Same contract and result (including order) as solve_level_sle, answered
/// from the precomputed tables.
std::vector<LevelCandidate> solve_level_lut(const std::vector<gf2::BitVec>& prefix,
                                            const gf2::EchelonDecomposition& decomp,
                                            const LookupTables& tables, uint32_t level,
                                            uint64_t* ops = nullptr);

/// Terminal expansion: extends a full header prefix with every
/// w_{nv+1} in F_2^{rho_{nv+1}} whose reconstructed (pi, h) passes the hash
/// check. `examined`, when given, receives the number of candidates tested.
std::vector<UnmixingVector> expand_terminal(const std::vector<gf2::BitVec>& prefix,
                                            const gf2::EchelonDecomposition& decomp,
                                            const HeaderConfig& cfg, uint64_t* ops = nullptr,
                                            uint64_t* examined = nullptr);

/// DeRPIA: recovers the source packets of a full-row-rank g x L_x matrix y
/// without knowledge of the coding matrix. Delegates to the Gaussian fast
/// path when available. The recovered set always contains the g true
/// packets and may contain hash-consistent phantoms; the caller
/// deduplicates. Throws InsufficientRankError when rank(y) < y.rows().
DecodeResult derpia(const gf2::BinaryMatrix& y, const HeaderConfig& cfg, DecodeVariant variant);

/// Ground-truth oracle: enumerates all combinations of an RREF basis of y
/// and keeps those with canonical header blocks and a consistent hash.
/// Refuses g > 16.
DecodeResult brute_force_decode(const gf2::BinaryMatrix& y, const HeaderConfig& cfg);

}  // namespace necorpia

#endif
