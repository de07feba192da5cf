#include "necorpia/packet.hpp"

namespace necorpia {

namespace {

constexpr uint64_t kHashKey = 0x6e65636f72706961ULL;  // deployment-wide constant

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

gf2::BitVec hash_payload(const gf2::BitVec& payload, uint32_t hash_len) {
  gf2::BitVec out(hash_len);
  if (hash_len == 0) return out;
  uint64_t state = kHashKey ^ mix64(payload.size() + 0x9e3779b97f4a7c15ULL);
  for (uint64_t w : payload.words()) state = mix64(state ^ (w * 0xff51afd7ed558ccdULL));
  for (size_t k = 0; k < out.words().size(); ++k) out.words()[k] = mix64(state + k + 1);
  out.clear_tail();
  return out;
}

bool check_hash(const gf2::BitVec& candidate, const HeaderConfig& cfg) {
  if (candidate.size() != cfg.tail_len())
    throw std::invalid_argument("check_hash: expected a vector of length L_p");
  const gf2::BitVec payload = candidate.subvec(0, cfg.payload_len);
  const gf2::BitVec stored = candidate.subvec(cfg.payload_len, cfg.hash_len);
  return stored == hash_payload(payload, cfg.hash_len);
}

gf2::BitVec flatten(const SourcePacket& p, const HeaderConfig& cfg) {
  cfg.validate();
  if (p.indices.size() != cfg.n_v() || p.payload.size() != cfg.payload_len ||
      p.hash.size() != cfg.hash_len)
    throw std::invalid_argument("flatten: packet inconsistent with config");
  gf2::BitVec x(cfg.packet_len());
  for (uint32_t l = 0; l < cfg.n_v(); ++l) {
    if (p.indices[l] < 1 || p.indices[l] > cfg.lengths[l])
      throw std::invalid_argument("flatten: subvector index out of range");
    x.set(cfg.block_offset(l) + p.indices[l] - 1, true);
  }
  x.splice(cfg.header_len(), p.payload);
  x.splice(cfg.header_len() + cfg.payload_len, p.hash);
  return x;
}

std::optional<SourcePacket> parse(const gf2::BitVec& v, const HeaderConfig& cfg,
                                  const Sts& sts) {
  cfg.validate();
  if (v.size() != cfg.packet_len())
    throw std::invalid_argument("parse: expected a vector of length L_x");
  SourcePacket p;
  p.sts = sts;
  p.indices.reserve(cfg.n_v());
  for (uint32_t l = 0; l < cfg.n_v(); ++l) {
    const gf2::BitVec block = v.subvec(cfg.block_offset(l), cfg.lengths[l]);
    const auto bit = block.single_bit();
    if (!bit) return std::nullopt;
    p.indices.push_back(*bit + 1);
  }
  p.payload = v.subvec(cfg.header_len(), cfg.payload_len);
  p.hash = v.subvec(cfg.header_len() + cfg.payload_len, cfg.hash_len);
  if (p.hash != hash_payload(p.payload, cfg.hash_len)) return std::nullopt;
  return p;
}

SourcePacket make_source_packet(const HeaderConfig& cfg, const Sts& sts,
                                const std::vector<uint32_t>& indices,
                                const gf2::BitVec& payload) {
  cfg.validate();
  if (payload.size() != cfg.payload_len)
    throw std::invalid_argument("make_source_packet: payload length mismatch");
  SourcePacket p{sts, indices, payload, hash_payload(payload, cfg.hash_len)};
  for (uint32_t l = 0; l < cfg.n_v(); ++l)
    if (indices.size() != cfg.n_v() || indices[l] < 1 || indices[l] > cfg.lengths[l])
      throw std::invalid_argument("make_source_packet: index out of range");
  return p;
}

}  // namespace necorpia
