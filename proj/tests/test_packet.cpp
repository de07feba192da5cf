#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "necorpia/packet.hpp"

using namespace necorpia;
using gf2::BitVec;

namespace {

HeaderConfig small_cfg() {
  HeaderConfig cfg;
  cfg.lengths = {3, 3};
  cfg.payload_len = 3;
  cfg.hash_len = 8;
  return cfg;
}

BitVec bits(const std::string& s) {
  BitVec v(static_cast<uint32_t>(s.size()));
  for (uint32_t i = 0; i < s.size(); ++i) v.set(i, s[i] == '1');
  return v;
}

}  // namespace

TEST_CASE("flatten lays out canonical blocks, payload, hash") {
  const HeaderConfig cfg = small_cfg();
  const SourcePacket p = make_source_packet(cfg, {}, {1, 2}, bits("101"));
  const BitVec x = flatten(p, cfg);
  REQUIRE(x.size() == cfg.packet_len());
  CHECK(x.subvec(0, 3) == bits("100"));
  CHECK(x.subvec(3, 3) == bits("010"));
  CHECK(x.subvec(6, 3) == bits("101"));
  CHECK(x.subvec(9, 8) == hash_payload(bits("101"), 8));
}

TEST_CASE("Example-1 style coding vectors flatten to the expected subvectors") {
  HeaderConfig cfg = small_cfg();
  const SourcePacket p = make_source_packet(cfg, {}, {1, 2}, bits("011"));
  const BitVec x = flatten(p, cfg);
  CHECK(x.subvec(0, 3).to_string() == "100");
  CHECK(x.subvec(3, 3).to_string() == "010");
}

TEST_CASE("flatten rejects an out-of-range index") {
  const HeaderConfig cfg = small_cfg();
  SourcePacket p = make_source_packet(cfg, {}, {1, 2}, bits("101"));
  p.indices[1] = 4;
  CHECK_THROWS_AS(flatten(p, cfg), std::invalid_argument);
}

TEST_CASE("parse inverts flatten on random packets") {
  HeaderConfig cfg;
  cfg.lengths = {5, 9, 4};
  cfg.payload_len = 40;
  cfg.hash_len = 16;
  Rng rng(99);
  for (int t = 0; t < 100; ++t) {
    std::vector<uint32_t> idx;
    for (uint32_t l : cfg.lengths)
      idx.push_back(1 + static_cast<uint32_t>(rng.uniform_below(l)));
    const SourcePacket p =
        make_source_packet(cfg, {2, 5}, idx, BitVec::random(cfg.payload_len, rng));
    const auto back = parse(flatten(p, cfg), cfg, {2, 5});
    REQUIRE(back.has_value());
    CHECK(*back == p);
  }
}

TEST_CASE("a two-packet mixture never parses when index tuples differ") {
  const HeaderConfig cfg = small_cfg();
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<uint32_t> ia, ib;
    for (uint32_t l : cfg.lengths) {
      ia.push_back(1 + static_cast<uint32_t>(rng.uniform_below(l)));
      ib.push_back(1 + static_cast<uint32_t>(rng.uniform_below(l)));
    }
    if (ia == ib) continue;
    const SourcePacket a = make_source_packet(cfg, {}, ia, BitVec::random(3, rng));
    const SourcePacket b = make_source_packet(cfg, {}, ib, BitVec::random(3, rng));
    BitVec sum = flatten(a, cfg);
    sum.xor_with(flatten(b, cfg));
    CHECK_FALSE(parse(sum, cfg).has_value());
  }
}

TEST_CASE("every constructed packet has a hash-consistent tail") {
  HeaderConfig cfg;
  cfg.lengths = {12};
  cfg.payload_len = 25;
  cfg.hash_len = 9;
  Rng rng(61);
  for (int t = 0; t < 50; ++t) {
    const SourcePacket p = make_source_packet(
        cfg, {}, {1 + static_cast<uint32_t>(rng.uniform_below(12))},
        BitVec::random(cfg.payload_len, rng));
    const BitVec x = flatten(p, cfg);
    CHECK(check_hash(x.subvec(cfg.header_len(), cfg.tail_len()), cfg));
  }
}

TEST_CASE("hash is deterministic and empty at L_h = 0") {
  Rng rng(1);
  const BitVec payload = BitVec::random(128, rng);
  CHECK(hash_payload(payload, 0).size() == 0);
  CHECK(hash_payload(payload, 24) == hash_payload(payload, 24));
  CHECK(hash_payload(payload, 64).size() == 64);
}

TEST_CASE("check_hash accepts exactly the consistent tails") {
  HeaderConfig cfg = small_cfg();
  Rng rng(2);
  const BitVec payload = BitVec::random(cfg.payload_len, rng);
  BitVec tail(cfg.tail_len());
  tail.splice(0, payload);
  tail.splice(cfg.payload_len, hash_payload(payload, cfg.hash_len));
  CHECK(check_hash(tail, cfg));
  tail.set(cfg.payload_len, !tail.get(cfg.payload_len));
  CHECK_FALSE(check_hash(tail, cfg));
  CHECK_THROWS_AS(check_hash(BitVec(3), cfg), std::invalid_argument);
}

TEST_CASE("hash collision rate against a reference payload is about 2^-16") {
  const uint32_t hash_len = 16;
  Rng rng(2024);
  const BitVec reference_hash = hash_payload(BitVec::random(64, rng), hash_len);
  const uint32_t trials = 100000;
  uint32_t collisions = 0;
  for (uint32_t t = 0; t < trials; ++t)
    if (hash_payload(BitVec::random(64, rng), hash_len) == reference_hash) ++collisions;
  const double p = std::pow(2.0, -16.0);
  const double sigma = std::sqrt(trials * p * (1 - p));
  CHECK(std::abs(collisions - trials * p) <= 3.0 * sigma + 1.0);
}

TEST_CASE("hash output bits look uniform") {
  const uint32_t trials = 20000, hash_len = 16;
  Rng rng(77);
  std::vector<uint32_t> ones(hash_len, 0);
  for (uint32_t t = 0; t < trials; ++t) {
    const BitVec h = hash_payload(BitVec::random(96, rng), hash_len);
    for (uint32_t b = 0; b < hash_len; ++b) ones[b] += h.get(b);
  }
  const double sigma = std::sqrt(trials * 0.25);
  for (uint32_t b = 0; b < hash_len; ++b)
    CHECK(std::abs(static_cast<double>(ones[b]) - trials / 2.0) <= 4.0 * sigma);
}
