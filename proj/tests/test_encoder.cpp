#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "necorpia/encoder.hpp"
#include "oracles.hpp"

using namespace necorpia;
using gf2::BinaryMatrix;
using gf2::BitVec;

TEST_CASE("random_source with a single one-slot box always picks index 1") {
  HeaderConfig cfg;
  cfg.lengths = {1};
  cfg.payload_len = 8;
  cfg.hash_len = 4;
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const SourcePacket p = random_source(cfg, {}, BitVec::random(8, rng), rng);
    CHECK(p.indices == std::vector<uint32_t>{1});
  }
}

TEST_CASE("random_source is reproducible under a fixed seed") {
  HeaderConfig cfg;
  cfg.lengths = {40, 60};
  cfg.payload_len = 32;
  cfg.hash_len = 8;
  Rng a(123), b(123);
  const BitVec payload(32);
  const SourcePacket pa = random_source(cfg, {}, payload, a);
  const SourcePacket pb = random_source(cfg, {}, payload, b);
  CHECK(pa == pb);
}

TEST_CASE("random_source indices are uniform within 3 sigma") {
  HeaderConfig cfg;
  cfg.lengths = {100};
  cfg.payload_len = 16;
  cfg.hash_len = 0;
  Rng rng(2718);
  const uint32_t trials = 100000;
  std::vector<uint32_t> counts(100, 0);
  const BitVec payload(16);
  for (uint32_t t = 0; t < trials; ++t)
    counts[random_source(cfg, {}, payload, rng).indices[0] - 1]++;
  const double mean = trials / 100.0;
  const double sigma = std::sqrt(trials * 0.01 * 0.99);
  for (uint32_t i = 0; i < 100; ++i)
    CHECK(std::abs(static_cast<double>(counts[i]) - mean) <= 3.0 * sigma);
}

TEST_CASE("mix is the GF(2) combination and respects canonical coefficients") {
  Rng rng(9);
  std::vector<BitVec> pkts;
  for (int i = 0; i < 5; ++i) pkts.push_back(BitVec::random(33, rng));
  for (uint32_t i = 0; i < 5; ++i)
    CHECK(mix(pkts, BitVec::canonical(5, i)) == pkts[i]);

  BitVec coeffs(5);
  coeffs.set(1, true);
  coeffs.set(3, true);
  BitVec expect = pkts[1];
  expect.xor_with(pkts[3]);
  CHECK(mix(pkts, coeffs) == expect);

  CHECK_THROWS_AS(mix(pkts, BitVec(4)), std::invalid_argument);
}

TEST_CASE("encode_mix stamps the slot and combines bodies") {
  HeaderConfig cfg;
  cfg.lengths = {4, 4};
  cfg.payload_len = 24;
  cfg.hash_len = 8;
  Rng rng(15);
  const Sts sts{3, 42};
  const Generation gen = random_generation(cfg, sts, 3, rng);
  BitVec coeffs(3);
  coeffs.set(0, true);
  coeffs.set(2, true);
  const CodedPacket coded = encode_mix(gen, coeffs);
  CHECK(coded.sts == sts);
  CHECK(coded.body.size() == cfg.packet_len());
  BitVec expect = flatten(gen.sources[0], cfg);
  expect.xor_with(flatten(gen.sources[2], cfg));
  CHECK(coded.body == expect);
}

TEST_CASE("random_full_rank_matrix: g=1 gives the only invertible matrix") {
  Rng rng(10);
  const BinaryMatrix a = random_full_rank_matrix(1, rng);
  CHECK(a.get(0, 0));
}

TEST_CASE("random_full_rank_matrix always has rank g") {
  Rng rng(11);
  for (uint32_t g = 1; g <= 12; ++g) {
    const BinaryMatrix a = random_full_rank_matrix(g, rng);
    CHECK(oracles::rank_naive(a) == g);
  }
}

TEST_CASE("invertible fraction of random 8x8 matrices matches the closed form") {
  // Acceptance rate of the rejection sampler equals the invertible density.
  Rng rng(12);
  const uint32_t trials = 100000;
  uint32_t invertible = 0;
  for (uint32_t t = 0; t < trials; ++t)
    if (gf2::rank(BinaryMatrix::random(8, 8, rng)) == 8) ++invertible;
  const double p = oracles::invertible_fraction(8);  // about 0.2899
  CHECK(p == doctest::Approx(0.28988).epsilon(1e-3));
  const double sigma = std::sqrt(trials * p * (1 - p));
  CHECK(std::abs(static_cast<double>(invertible) - trials * p) <= 3.0 * sigma);
}

TEST_CASE("full-rank A times full-rank X keeps rank g") {
  Rng rng(13);
  HeaderConfig cfg;
  cfg.lengths = {6, 6};
  cfg.payload_len = 48;
  cfg.hash_len = 8;
  for (int t = 0; t < 30; ++t) {
    const uint32_t g = 2 + static_cast<uint32_t>(rng.uniform_below(6));
    const Generation gen = random_generation(cfg, {}, g, rng);
    const BinaryMatrix x = gen.flatten_matrix();
    REQUIRE(gf2::rank(x) == g);
    const BinaryMatrix a = random_full_rank_matrix(g, rng);
    CHECK(gf2::rank(gf2::mat_mul(a, x)) == g);
  }
}
