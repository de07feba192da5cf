#include "necorpia/decoder.hpp"

#include <algorithm>

namespace necorpia {

using gf2::BinaryMatrix;
using gf2::BitVec;
using gf2::EchelonDecomposition;

namespace {

// v = sum over earlier levels of w_i * B_{i,level}. Admissible prefix
// parts hold at most one set bit, so this is at most level-1 row XORs.
// Counts L for the zero-init and L per XOR.
BitVec combine_prefix(const std::vector<BitVec>& prefix, const EchelonDecomposition& d,
                      uint32_t level, uint64_t& ops) {
  const uint32_t width = d.widths[level];
  BitVec v(width);
  ops += width;
  for (uint32_t i = 0; i < level; ++i) {
    const auto bit = prefix[i].first_set_bit();
    if (!bit) continue;
    d.b(i, level).xor_row_into(*bit, v);
    ops += width;
  }
  return v;
}

BitVec combine_prefix_payload(const std::vector<BitVec>& prefix, const EchelonDecomposition& d,
                              uint64_t& ops) {
  const uint32_t nv = d.n_header_blocks();
  const uint32_t lp = d.widths[nv];
  BitVec s(lp);
  ops += lp;
  for (uint32_t i = 0; i < nv; ++i) {
    const auto bit = prefix[i].first_set_bit();
    if (!bit) continue;
    d.c(i).xor_row_into(*bit, s);
    ops += lp;
  }
  return s;
}

std::optional<uint32_t> row_single_bit(const BinaryMatrix& m, uint32_t r) {
  std::optional<uint32_t> found;
  for (uint32_t k = 0; k < m.words_per_row(); ++k) {
    uint64_t w = m.word(r, k);
    if (!w) continue;
    if (found || (w & (w - 1))) return std::nullopt;
    found = k * gf2::kWordBits + static_cast<uint32_t>(__builtin_ctzll(w));
  }
  return found;
}

// RREF of m using pivots restricted to columns [c0, c0+len); elimination
// spans all columns and the row transform is accumulated in t.
std::vector<uint32_t> rref_on_columns(BinaryMatrix& m, uint32_t c0, uint32_t len,
                                      BinaryMatrix& t) {
  t = BinaryMatrix::identity(m.rows());
  std::vector<uint32_t> pivots;
  uint32_t r = 0;
  for (uint32_t c = c0; c < c0 + len && r < m.rows(); ++c) {
    uint32_t pivot = m.rows();
    for (uint32_t i = r; i < m.rows(); ++i) {
      if (m.get(i, c)) {
        pivot = i;
        break;
      }
    }
    if (pivot == m.rows()) continue;
    m.swap_rows(r, pivot);
    t.swap_rows(r, pivot);
    for (uint32_t i = 0; i < m.rows(); ++i) {
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

UnmixingVector split_by_ranks(const BitVec& w, const std::vector<uint32_t>& ranks) {
  UnmixingVector u;
  u.parts.reserve(ranks.size());
  uint32_t off = 0;
  for (uint32_t rho : ranks) {
    u.parts.push_back(w.subvec(off, rho));
    off += rho;
  }
  return u;
}

}  // namespace

std::optional<DecodeResult> try_gaussian(const EchelonDecomposition& decomp,
                                         const HeaderConfig& cfg) {
  const uint32_t g = decomp.total_rank();
  const uint32_t nv = decomp.n_header_blocks();
  if (g == 0) return std::nullopt;
  for (uint32_t l = 0; l < nv; ++l) {
    // Rows of groups below l are zero in segment l, so the column block has
    // rank g only if those groups are empty and the stacked blocks above
    // have full rank.
    uint32_t upper = 0;
    for (uint32_t i = 0; i <= l; ++i) upper += decomp.ranks[i];
    if (upper != g) continue;
    BinaryMatrix stack(0, decomp.widths[l]);
    for (uint32_t i = 0; i <= l; ++i) stack = stack.vstack(decomp.b(i, l));
    if (gf2::rank(stack) != g) continue;

    BinaryMatrix e = decomp.reassemble();
    BinaryMatrix t;
    rref_on_columns(e, cfg.block_offset(l), cfg.lengths[l], t);

    DecodeResult res;
    res.stats.branches_per_level.assign(nv + 1, 0);
    res.stats.used_fast_path = true;
    res.recovered.reserve(g);
    res.unmixing_vectors.reserve(g);
    bool ok = true;
    for (uint32_t r = 0; r < g; ++r) {
      auto p = parse(e.row(r), cfg);
      if (!p) {
        ok = false;
        break;
      }
      res.stats.gf2_ops += cfg.tail_len();
      res.recovered.push_back(std::move(*p));
      res.unmixing_vectors.push_back(split_by_ranks(t.row(r), decomp.ranks));
    }
    if (!ok) continue;
    res.stats.terminal_candidates = g;
    return res;
  }
  return std::nullopt;
}

std::vector<LevelCandidate> solve_level_sle(const std::vector<BitVec>& prefix,
                                            const EchelonDecomposition& decomp, uint32_t level,
                                            uint64_t* ops) {
  uint64_t local = 0;
  uint64_t& n_ops = ops ? *ops : local;
  const BinaryMatrix& diag = decomp.diag(level);
  const uint32_t width = decomp.widths[level];
  const uint32_t rho = decomp.ranks[level];
  std::vector<LevelCandidate> out;

  if (level == 0) {
    // Empty prefix; w_1 = 0 is never admissible, so only canonical rows of
    // the first diagonal block yield candidates.
    for (uint32_t t = 0; t < rho; ++t) {
      n_ops += width;
      if (auto j = row_single_bit(diag, t))
        out.push_back({BitVec::canonical(rho, t), *j + 1});
    }
    return out;
  }

  const BitVec v = combine_prefix(prefix, decomp, level, n_ops);
  n_ops += width;
  if (auto j = v.single_bit()) out.push_back({BitVec(rho), *j + 1});
  for (uint32_t t = 0; t < rho; ++t) {
    n_ops += width;
    uint32_t j = 0;
    if (diag.row_xor_is_canonical(t, v, j)) out.push_back({BitVec::canonical(rho, t), j + 1});
  }
  return out;
}

LookupTables build_tables(const EchelonDecomposition& decomp, uint64_t* ops) {
  uint64_t local = 0;
  uint64_t& n_ops = ops ? *ops : local;
  LookupTables tables;
  const uint32_t nv = decomp.n_header_blocks();
  tables.levels.resize(nv);
  for (uint32_t l = 0; l < nv; ++l) {
    const BinaryMatrix& diag = decomp.diag(l);
    const uint32_t width = decomp.widths[l];
    const uint32_t rho = decomp.ranks[l];
    auto& lv = tables.levels[l];
    lv.pivot_col = decomp.pivot_cols[l];

    for (uint32_t t = 0; t < rho; ++t) {
      n_ops += width + 1;  // pivot identification and de-pivoting
      BitVec u = diag.row(t);
      u.set(lv.pivot_col[t], false);
      bool present = false;
      for (const auto& existing : lv.depivoted) {
        n_ops += width;
        if (existing == u) {
          present = true;
          break;
        }
      }
      if (!present) lv.depivoted.push_back(std::move(u));
    }

    lv.row_sets.resize(lv.depivoted.size());
    for (uint32_t t = 0; t < rho; ++t) {
      n_ops += width + 1;
      BitVec u = diag.row(t);
      u.set(lv.pivot_col[t], false);
      for (size_t k = 0; k < lv.depivoted.size(); ++k) {
        n_ops += width;
        if (lv.depivoted[k] == u) {
          lv.row_sets[k].push_back(t);
          break;
        }
      }
    }
  }
  return tables;
}

std::vector<LevelCandidate> solve_level_lut(const std::vector<BitVec>& prefix,
                                            const EchelonDecomposition& decomp,
                                            const LookupTables& tables, uint32_t level,
                                            uint64_t* ops) {
  uint64_t local = 0;
  uint64_t& n_ops = ops ? *ops : local;
  const uint32_t width = decomp.widths[level];
  const uint32_t rho = decomp.ranks[level];
  const auto& lv = tables.levels[level];
  std::vector<LevelCandidate> out;

  BitVec v(width);
  if (level > 0) {
    v = combine_prefix(prefix, decomp, level, n_ops);
    n_ops += width;
    if (auto j = v.single_bit()) out.push_back({BitVec(rho), *j + 1});
  }
  for (size_t k = 0; k < lv.depivoted.size(); ++k) {
    n_ops += width;
    if (lv.depivoted[k] == v) {
      for (uint32_t t : lv.row_sets[k])
        out.push_back({BitVec::canonical(rho, t), lv.pivot_col[t] + 1});
      break;
    }
  }
  return out;
}

std::vector<UnmixingVector> expand_terminal(const std::vector<BitVec>& prefix,
                                            const EchelonDecomposition& decomp,
                                            const HeaderConfig& cfg, uint64_t* ops,
                                            uint64_t* examined) {
  uint64_t local = 0;
  uint64_t& n_ops = ops ? *ops : local;
  const uint32_t nv = decomp.n_header_blocks();
  const uint32_t lp = decomp.widths[nv];
  const uint32_t rho = decomp.ranks[nv];
  if (rho > 30) throw std::runtime_error("expand_terminal: 2^rho candidates infeasible");

  const BitVec s = combine_prefix_payload(prefix, decomp, n_ops);
  std::vector<UnmixingVector> out;
  const uint64_t count = uint64_t{1} << rho;
  for (uint64_t mask = 0; mask < count; ++mask) {
    BitVec tail = s;
    if (mask) {
      n_ops += lp;
      for (uint64_t m = mask; m;) {
        const uint32_t b = static_cast<uint32_t>(__builtin_ctzll(m));
        m &= m - 1;
        decomp.c(nv).xor_row_into(b, tail);
        n_ops += lp;
      }
    }
    n_ops += lp;
    if (examined) ++*examined;
    if (check_hash(tail, cfg)) {
      UnmixingVector u;
      u.parts = prefix;
      BitVec w(rho);
      for (uint32_t b = 0; b < rho; ++b)
        if ((mask >> b) & 1) w.set(b, true);
      u.parts.push_back(std::move(w));
      out.push_back(std::move(u));
    }
  }
  return out;
}

namespace {

struct TreeSearch {
  const EchelonDecomposition& d;
  const HeaderConfig& cfg;
  const LookupTables* tables;
  DecodeResult& res;
  std::vector<BitVec> prefix;
  std::vector<uint32_t> js;

  void run() {
    prefix.reserve(cfg.n_v() + 1);
    js.reserve(cfg.n_v());
    descend(0);
  }

  void descend(uint32_t level) {
    if (level == cfg.n_v()) {
      uint64_t examined = 0;
      auto found = expand_terminal(prefix, d, cfg, &res.stats.gf2_ops, &examined);
      res.stats.branches_per_level[level] += examined;
      for (auto& u : found) {
        const BitVec tail = tail_of(u);
        SourcePacket p;
        p.indices = js;
        p.payload = tail.subvec(0, cfg.payload_len);
        p.hash = tail.subvec(cfg.payload_len, cfg.hash_len);
        res.recovered.push_back(std::move(p));
        res.unmixing_vectors.push_back(std::move(u));
      }
      return;
    }
    auto cands = tables ? solve_level_lut(prefix, d, *tables, level, &res.stats.gf2_ops)
                        : solve_level_sle(prefix, d, level, &res.stats.gf2_ops);
    res.stats.branches_per_level[level] += cands.size();
    for (auto& c : cands) {
      prefix.push_back(std::move(c.w));
      js.push_back(c.index);
      descend(level + 1);
      js.pop_back();
      prefix.pop_back();
    }
  }

  BitVec tail_of(const UnmixingVector& u) const {
    const uint32_t nv = d.n_header_blocks();
    BitVec tail(d.widths[nv]);
    for (uint32_t i = 0; i <= nv; ++i) {
      const BitVec& part = u.parts[i];
      for (uint32_t b = 0; b < part.size(); ++b)
        if (part.get(b)) d.c(i).xor_row_into(b, tail);
    }
    return tail;
  }
};

}  // namespace

DecodeResult derpia(const BinaryMatrix& y, const HeaderConfig& cfg, DecodeVariant variant) {
  cfg.validate();
  if (y.cols() != cfg.packet_len())
    throw std::invalid_argument("derpia: column count does not match the packet length");
  const uint32_t g = y.rows();
  DecodeResult res;
  res.stats.branches_per_level.assign(cfg.n_v() + 1, 0);
  if (g == 0) return res;
  if (gf2::rank(y) < g)
    throw gf2::InsufficientRankError("derpia: received matrix is rank deficient");

  const EchelonDecomposition decomp = block_rref(y, cfg.block_widths());
  if (auto fast = try_gaussian(decomp, cfg)) return *fast;

  LookupTables tables;
  if (variant == DecodeVariant::Lut) tables = build_tables(decomp, &res.stats.gf2_ops);
  TreeSearch search{decomp, cfg, variant == DecodeVariant::Lut ? &tables : nullptr, res, {}, {}};
  search.run();
  res.stats.terminal_candidates = res.unmixing_vectors.size();
  return res;
}

DecodeResult brute_force_decode(const BinaryMatrix& y, const HeaderConfig& cfg) {
  cfg.validate();
  if (y.rows() > 16)
    throw std::invalid_argument("brute_force_decode: refusing g > 16 (2^g enumeration)");
  if (y.cols() != cfg.packet_len())
    throw std::invalid_argument("brute_force_decode: column count mismatch");

  BinaryMatrix r = y;
  const uint32_t basis = static_cast<uint32_t>(gf2::rref_in_place(r).size());
  DecodeResult res;
  res.stats.branches_per_level.assign(cfg.n_v() + 1, 0);
  for (uint64_t mask = 1; mask < (uint64_t{1} << basis); ++mask) {
    BitVec x(cfg.packet_len());
    for (uint64_t m = mask; m;) {
      const uint32_t b = static_cast<uint32_t>(__builtin_ctzll(m));
      m &= m - 1;
      r.xor_row_into(b, x);
    }
    if (auto p = parse(x, cfg)) {
      res.recovered.push_back(std::move(*p));
      UnmixingVector u;
      BitVec w(basis);
      for (uint32_t b = 0; b < basis; ++b)
        if ((mask >> b) & 1) w.set(b, true);
      u.parts.push_back(std::move(w));
      res.unmixing_vectors.push_back(std::move(u));
    }
  }
  res.stats.terminal_candidates = res.unmixing_vectors.size();
  return res;
}

}  // namespace necorpia
