#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "necorpia/analytics.hpp"
#include "necorpia/decoder.hpp"
#include "necorpia/encoder.hpp"

using namespace necorpia;
using gf2::BinaryMatrix;
using gf2::BitVec;

namespace {

HeaderConfig cfg33(uint32_t hash_len = 16) {
  HeaderConfig cfg;
  cfg.lengths = {3, 3};
  cfg.payload_len = 64;
  cfg.hash_len = hash_len;
  return cfg;
}

/// Generation with prescribed index tuples and random payloads, mixed by a
/// random full-rank matrix.
struct Fixture {
  Generation gen;
  BinaryMatrix y;
};

Fixture make_fixture(const HeaderConfig& cfg,
                     const std::vector<std::vector<uint32_t>>& tuples, uint64_t seed) {
  Rng rng(seed);
  Fixture f;
  f.gen.cfg = cfg;
  for (const auto& idx : tuples)
    f.gen.sources.push_back(
        make_source_packet(cfg, {}, idx, BitVec::random(cfg.payload_len, rng)));
  BinaryMatrix x = f.gen.flatten_matrix();
  while (gf2::rank(x) < x.rows()) {
    for (uint32_t i = 0; i < f.gen.g(); ++i) {
      f.gen.sources[i] = make_source_packet(cfg, {}, tuples[i],
                                            BitVec::random(cfg.payload_len, rng));
    }
    x = f.gen.flatten_matrix();
  }
  const BinaryMatrix a = random_full_rank_matrix(f.gen.g(), rng);
  f.y = gf2::mat_mul(a, x);
  return f;
}

std::set<BitVec> bodies(const std::vector<SourcePacket>& pkts, const HeaderConfig& cfg) {
  std::set<BitVec> out;
  for (const auto& p : pkts) out.insert(flatten(p, cfg));
  return out;
}

BitVec bits(const std::string& s) {
  BitVec v(static_cast<uint32_t>(s.size()));
  for (uint32_t i = 0; i < s.size(); ++i) v.set(i, s[i] == '1');
  return v;
}

// A 4x6 diagonal block with two rows sharing a de-pivoted form, wrapped
// in a single-level decomposition.
gf2::EchelonDecomposition lut_example_decomp() {
  gf2::EchelonDecomposition d;
  d.widths = {6, 4};
  d.ranks = {4, 0};
  d.b_blocks = {{BinaryMatrix::parse({
      "100010",
      "001010",
      "000110",
      "000001",
  })}};
  d.c_blocks = {BinaryMatrix(4, 4), BinaryMatrix(0, 4)};
  d.pivot_cols = {{0, 2, 3, 5}, {}};
  return d;
}

// Two-level decomposition whose level-1 carry vector equals `v` when the
// prefix selects the single row of the first block.
gf2::EchelonDecomposition carry_decomp(const BitVec& v) {
  gf2::EchelonDecomposition d;
  d.widths = {1, 6, 4};
  d.ranks = {1, 4, 0};
  BinaryMatrix b00 = BinaryMatrix::parse({"1"});
  BinaryMatrix b01(1, 6);
  b01.set_row(0, v);
  d.b_blocks = {{b00, b01}, {lut_example_decomp().b_blocks[0][0]}};
  d.c_blocks = {BinaryMatrix(1, 4), BinaryMatrix(4, 4), BinaryMatrix(0, 4)};
  d.pivot_cols = {{0}, {0, 2, 3, 5}, {}};
  return d;
}

}  // namespace

TEST_CASE("fast path decodes when the second subvectors are collision-free") {
  // First subvectors collide ((1,0,0) twice) but the second block is full
  // rank, so Gaussian elimination suffices.
  const HeaderConfig cfg = cfg33();
  const Fixture f = make_fixture(cfg, {{1, 2}, {1, 3}, {3, 1}}, 100);
  const auto d = gf2::block_rref(f.y, cfg.block_widths());
  const auto fast = try_gaussian(d, cfg);
  REQUIRE(fast.has_value());
  CHECK(fast->stats.used_fast_path);
  CHECK(bodies(fast->recovered, cfg) == bodies(f.gen.sources, cfg));

  const auto res = derpia(f.y, cfg, DecodeVariant::Sle);
  CHECK(res.stats.used_fast_path);
  CHECK(bodies(res.recovered, cfg) == bodies(f.gen.sources, cfg));
}

TEST_CASE("fast path unavailable when both blocks have collisions") {
  const HeaderConfig cfg = cfg33();
  const Fixture f = make_fixture(cfg, {{1, 2}, {1, 3}, {3, 2}}, 101);
  const auto d = gf2::block_rref(f.y, cfg.block_widths());
  CHECK_FALSE(try_gaussian(d, cfg).has_value());
}

TEST_CASE("fast path always fires for g = 1") {
  const HeaderConfig cfg = cfg33();
  const Fixture f = make_fixture(cfg, {{2, 3}}, 102);
  const auto res = derpia(f.y, cfg, DecodeVariant::Lut);
  CHECK(res.stats.used_fast_path);
  REQUIRE(res.recovered.size() == 1);
  CHECK(flatten(res.recovered[0], cfg) == flatten(f.gen.sources[0], cfg));
}

TEST_CASE("tree decode of the doubly-collided three-packet case") {
  const HeaderConfig cfg = cfg33();
  const Fixture f = make_fixture(cfg, {{1, 2}, {1, 3}, {3, 2}}, 103);
  for (auto variant : {DecodeVariant::Sle, DecodeVariant::Lut}) {
    const auto res = derpia(f.y, cfg, variant);
    CHECK_FALSE(res.stats.used_fast_path);
    CHECK(bodies(res.recovered, cfg) == bodies(f.gen.sources, cfg));  // no phantoms
    CHECK(res.stats.terminal_candidates == 3);
    // The header-consistent mixture of all three packets is examined and
    // rejected by its hash.
    CHECK(res.stats.branches_per_level.back() == 4);
  }
}

TEST_CASE("tree decode of the four-packet cycle case") {
  const HeaderConfig cfg = cfg33();
  const Fixture f = make_fixture(cfg, {{1, 2}, {1, 3}, {2, 2}, {2, 3}}, 104);
  const auto d = gf2::block_rref(f.y, cfg.block_widths());
  CHECK(d.ranks == std::vector<uint32_t>{2, 1, 1});
  const auto res = derpia(f.y, cfg, DecodeVariant::Sle);
  CHECK_FALSE(res.stats.used_fast_path);
  // rho_3 = 1: every surviving header branch expands to exactly two
  // terminal candidates.
  CHECK(res.stats.branches_per_level[2] == 2 * res.stats.branches_per_level[1]);
  const auto truth = bodies(f.gen.sources, cfg);
  const auto got = bodies(res.recovered, cfg);
  for (const auto& b : truth) CHECK(got.count(b) == 1);
}

TEST_CASE("solve_level candidates match the worked carry-vector cases") {
  const BitVec v1 = bits("000010");
  const BitVec v2 = bits("010000");
  const BitVec v3 = bits("100100");
  const std::vector<BitVec> prefix{BitVec::canonical(1, 0)};

  {
    const auto d = carry_decomp(v1);
    const auto cands = solve_level_sle(prefix, d, 1);
    REQUIRE(cands.size() == 4);
    CHECK(cands[0].w.is_zero());
    CHECK(cands[0].index == 5);
    CHECK(cands[1].w == BitVec::canonical(4, 0));
    CHECK(cands[1].index == 1);
    CHECK(cands[2].w == BitVec::canonical(4, 1));
    CHECK(cands[2].index == 3);
    CHECK(cands[3].w == BitVec::canonical(4, 2));
    CHECK(cands[3].index == 4);
  }
  {
    const auto d = carry_decomp(v2);
    const auto cands = solve_level_sle(prefix, d, 1);
    REQUIRE(cands.size() == 1);  // only w = 0
    CHECK(cands[0].w.is_zero());
    CHECK(cands[0].index == 2);
  }
  {
    const auto d = carry_decomp(v3);
    CHECK(solve_level_sle(prefix, d, 1).empty());  // branch pruned
  }
}

TEST_CASE("look-up tables of the worked example") {
  const auto d = lut_example_decomp();
  const auto tables = build_tables(d);
  const auto& lv = tables.levels[0];
  REQUIRE(lv.depivoted.size() == 2);
  CHECK(lv.depivoted[0] == bits("000010"));
  CHECK(lv.depivoted[1] == bits("000000"));
  CHECK(lv.row_sets[0] == std::vector<uint32_t>{0, 1, 2});
  CHECK(lv.row_sets[1] == std::vector<uint32_t>{3});
}

TEST_CASE("look-up tables of an identity block with zero padding") {
  gf2::EchelonDecomposition d;
  d.widths = {7, 4};
  d.ranks = {3, 0};
  BinaryMatrix b(3, 7);
  for (uint32_t i = 0; i < 3; ++i) b.set(i, i, true);
  d.b_blocks = {{b}};
  d.c_blocks = {BinaryMatrix(3, 4), BinaryMatrix(0, 4)};
  d.pivot_cols = {{0, 1, 2}, {}};
  const auto tables = build_tables(d);
  REQUIRE(tables.levels[0].depivoted.size() == 1);
  CHECK(tables.levels[0].depivoted[0].is_zero());
  CHECK(tables.levels[0].row_sets[0] == std::vector<uint32_t>{0, 1, 2});
}

TEST_CASE("LUT answers equal SLE answers on random prefixes") {
  Rng rng(555);
  uint32_t compared = 0;
  while (compared < 1000) {
    const uint32_t g = 2 + static_cast<uint32_t>(rng.uniform_below(8));
    const uint32_t nv = 1 + static_cast<uint32_t>(rng.uniform_below(3));
    std::vector<uint32_t> widths;
    for (uint32_t l = 0; l < nv; ++l)
      widths.push_back(2 + static_cast<uint32_t>(rng.uniform_below(7)));
    widths.push_back(4 + static_cast<uint32_t>(rng.uniform_below(12)));
    uint32_t total = 0;
    for (uint32_t w : widths) total += w;
    const BinaryMatrix y = BinaryMatrix::random(g, total, rng);
    const auto d = gf2::block_rref(y, widths);
    const auto tables = build_tables(d);
    for (uint32_t level = 0; level < nv; ++level) {
      std::vector<BitVec> prefix;
      for (uint32_t i = 0; i < level; ++i) {
        BitVec part(d.ranks[i]);
        if (d.ranks[i] > 0 && rng.bit())
          part.set(static_cast<uint32_t>(rng.uniform_below(d.ranks[i])), true);
        prefix.push_back(std::move(part));
      }
      const auto sle = solve_level_sle(prefix, d, level);
      const auto lut = solve_level_lut(prefix, d, tables, level);
      REQUIRE(sle.size() == lut.size());
      for (size_t i = 0; i < sle.size(); ++i) {
        CHECK(sle[i].w == lut[i].w);
        CHECK(sle[i].index == lut[i].index);
      }
      ++compared;
    }
  }
}

TEST_CASE("decoder oracle equivalence on random collided instances") {
  Rng rng(31337);
  for (int t = 0; t < 100; ++t) {
    const uint32_t nv = 1 + t % 3;
    HeaderConfig cfg;
    cfg.lengths.assign(nv, 3 + t % 4);
    cfg.payload_len = 80;
    cfg.hash_len = 8;
    const uint32_t g = 2 + static_cast<uint32_t>(rng.uniform_below(8));
    Rng trial_rng(rng.next_u64());
    const Generation gen = random_generation(cfg, {}, g, trial_rng);
    const BinaryMatrix a = random_full_rank_matrix(g, trial_rng);
    const BinaryMatrix y = gf2::mat_mul(a, gen.flatten_matrix());

    const auto sle = derpia(y, cfg, DecodeVariant::Sle);
    const auto lut = derpia(y, cfg, DecodeVariant::Lut);
    const auto bf = brute_force_decode(y, cfg);

    const auto s1 = bodies(sle.recovered, cfg);
    const auto s2 = bodies(lut.recovered, cfg);
    const auto s3 = bodies(bf.recovered, cfg);
    CHECK(s1 == s2);
    CHECK(s1 == s3);
    for (const auto& b : bodies(gen.sources, cfg)) CHECK(s1.count(b) == 1);

    // SLE and LUT walk the same tree.
    CHECK(sle.stats.branches_per_level == lut.stats.branches_per_level);
    CHECK(sle.stats.terminal_candidates == lut.stats.terminal_candidates);
  }
}

TEST_CASE("emitted unmixing vectors obey the one-nonzero-component rule") {
  Rng rng(999);
  for (int t = 0; t < 60; ++t) {
    HeaderConfig cfg;
    cfg.lengths.assign(1 + t % 3, 4);
    cfg.payload_len = 64;
    cfg.hash_len = 10;
    const uint32_t g = 2 + static_cast<uint32_t>(rng.uniform_below(7));
    Rng trial_rng(rng.next_u64());
    const Generation gen = random_generation(cfg, {}, g, trial_rng);
    const BinaryMatrix a = random_full_rank_matrix(g, trial_rng);
    const auto res = derpia(gf2::mat_mul(a, gen.flatten_matrix()), cfg, DecodeVariant::Sle);
    if (res.stats.used_fast_path) continue;
    for (const auto& u : res.unmixing_vectors) {
      REQUIRE(u.parts.size() == cfg.n_v() + 1);
      CHECK(u.parts[0].popcount() == 1);
      for (uint32_t l = 1; l < cfg.n_v(); ++l) CHECK(u.parts[l].popcount() <= 1);
      uint32_t total = 0;
      for (const auto& part : u.parts) total += part.size();
      CHECK(total == g);
    }
  }
}

TEST_CASE("branch counts and instrumented ops stay within the closed-form bounds") {
  Rng rng(4242);
  const analytics::CostConstants consts;
  for (int t = 0; t < 150; ++t) {
    const uint32_t nv = 1 + t % 3;
    HeaderConfig cfg;
    cfg.lengths.assign(nv, 4 + t % 5);
    cfg.payload_len = 96;
    cfg.hash_len = 12;
    const uint32_t g = 2 + static_cast<uint32_t>(rng.uniform_below(9));
    Rng trial_rng(rng.next_u64());
    const Generation gen = random_generation(cfg, {}, g, trial_rng);
    const BinaryMatrix a = random_full_rank_matrix(g, trial_rng);
    const BinaryMatrix y = gf2::mat_mul(a, gen.flatten_matrix());

    const auto d = gf2::block_rref(y, cfg.block_widths());
    const analytics::RankProfile profile{d.ranks};
    const auto bound = analytics::branch_bound<uint64_t>(profile, 2);

    const auto sle = derpia(y, cfg, DecodeVariant::Sle);
    const auto lut = derpia(y, cfg, DecodeVariant::Lut);
    for (uint32_t l = 0; l < nv; ++l)
      CHECK(sle.stats.branches_per_level[l] <= bound.per_level[l]);
    CHECK(sle.stats.branches_per_level[nv] <= bound.terminal);

    const uint64_t k_sle =
        analytics::cost_sle<uint64_t>(profile, cfg.lengths, cfg.tail_len(), g, 2, consts);
    const uint64_t k_lut =
        analytics::cost_lut<uint64_t>(profile, cfg.lengths, cfg.tail_len(), g, 2, consts);
    CHECK(sle.stats.gf2_ops <= k_sle);
    CHECK(lut.stats.gf2_ops <= k_lut);
  }
}

TEST_CASE("decoding is deterministic") {
  const HeaderConfig cfg = cfg33();
  const Fixture f = make_fixture(cfg, {{1, 2}, {1, 3}, {3, 2}}, 106);
  const auto r1 = derpia(f.y, cfg, DecodeVariant::Sle);
  const auto r2 = derpia(f.y, cfg, DecodeVariant::Sle);
  CHECK(r1.stats.branches_per_level == r2.stats.branches_per_level);
  CHECK(r1.stats.gf2_ops == r2.stats.gf2_ops);
  CHECK(bodies(r1.recovered, cfg) == bodies(r2.recovered, cfg));
}

TEST_CASE("rank-deficient input is rejected") {
  const HeaderConfig cfg = cfg33();
  const Fixture f = make_fixture(cfg, {{1, 2}, {1, 3}}, 107);
  BinaryMatrix y(3, cfg.packet_len());
  y.set_row(0, f.y.row(0));
  y.set_row(1, f.y.row(1));
  y.set_row(2, f.y.row(0));  // duplicate
  CHECK_THROWS_AS(derpia(y, cfg, DecodeVariant::Sle), gf2::InsufficientRankError);
}

TEST_CASE("brute force refuses oversized enumerations") {
  const HeaderConfig cfg = cfg33();
  const BinaryMatrix y(17, cfg.packet_len());
  CHECK_THROWS_AS(brute_force_decode(y, cfg), std::invalid_argument);
}
