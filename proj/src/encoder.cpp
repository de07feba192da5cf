#include "necorpia/encoder.hpp"

namespace necorpia {

gf2::BinaryMatrix Generation::flatten_matrix() const {
  gf2::BinaryMatrix x(g(), cfg.packet_len());
  for (uint32_t i = 0; i < g(); ++i) x.set_row(i, flatten(sources[i], cfg));
  return x;
}

SourcePacket random_source(const HeaderConfig& cfg, const Sts& sts,
                           const gf2::BitVec& payload, Rng& rng) {
  cfg.validate();
  std::vector<uint32_t> indices(cfg.n_v());
  for (uint32_t l = 0; l < cfg.n_v(); ++l)
    indices[l] = static_cast<uint32_t>(rng.uniform_below(cfg.lengths[l])) + 1;
  return make_source_packet(cfg, sts, indices, payload);
}

gf2::BitVec mix(const std::vector<gf2::BitVec>& packets, const gf2::BitVec& coeffs) {
  if (coeffs.size() != packets.size())
    throw std::invalid_argument("mix: coefficient count must match packet count");
  if (packets.empty()) return gf2::BitVec();
  const uint32_t len = packets.front().size();
  gf2::BitVec out(len);
  for (uint32_t i = 0; i < packets.size(); ++i) {
    if (packets[i].size() != len) throw std::invalid_argument("mix: packet length mismatch");
    if (coeffs.get(i)) out.xor_with(packets[i]);
  }
  return out;
}

CodedPacket encode_mix(const Generation& gen, const gf2::BitVec& coeffs) {
  std::vector<gf2::BitVec> bodies;
  bodies.reserve(gen.g());
  for (const auto& p : gen.sources) bodies.push_back(flatten(p, gen.cfg));
  return CodedPacket{gen.sts, mix(bodies, coeffs)};
}

gf2::BinaryMatrix random_full_rank_matrix(uint32_t g, Rng& rng, uint32_t* attempts) {
  if (g == 0) throw std::invalid_argument("random_full_rank_matrix: g must be >= 1");
  uint32_t tries = 0;
  for (;;) {
    ++tries;
    gf2::BinaryMatrix a = gf2::BinaryMatrix::random(g, g, rng);
    if (gf2::rank(a) == g) {
      if (attempts) *attempts = tries;
      return a;
    }
  }
}

Generation random_generation(const HeaderConfig& cfg, const Sts& sts, uint32_t g, Rng& rng) {
  Generation gen{cfg, sts, {}};
  gen.sources.reserve(g);
  for (uint32_t i = 0; i < g; ++i)
    gen.sources.push_back(random_source(cfg, sts, gf2::BitVec::random(cfg.payload_len, rng), rng));
  while (g > 0 && gf2::rank(gen.flatten_matrix()) < g) {
    for (auto& p : gen.sources)
      p = random_source(cfg, sts, gf2::BitVec::random(cfg.payload_len, rng), rng);
  }
  return gen;
}

}  // namespace necorpia
