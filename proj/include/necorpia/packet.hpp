#ifndef NECORPIA_PACKET_HPP
#define NECORPIA_PACKET_HPP

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "necorpia/gf2.hpp"

namespace necorpia {

/// Shape of every packet in a generation: n_v header subvector lengths, the
/// payload length and the hash length, all in bits. The wire field is F_2.
struct HeaderConfig {
  std::vector<uint32_t> lengths;  // L_1..L_nv, each >= 1
  uint32_t payload_len = 0;       // L_pi
  uint32_t hash_len = 0;          // L_h

  static constexpr uint32_t field_order = 2;

  uint32_t n_v() const { return static_cast<uint32_t>(lengths.size()); }
  uint32_t header_len() const { return std::accumulate(lengths.begin(), lengths.end(), 0u); }
  uint32_t tail_len() const { return payload_len + hash_len; }    // L_p
  uint32_t packet_len() const { return header_len() + tail_len(); }  // L_x

  uint32_t block_offset(uint32_t l) const {
    uint32_t off = 0;
    for (uint32_t i = 0; i < l; ++i) off += lengths[i];
    return off;
  }

  /// Column widths for the echelon decomposition: L_1..L_nv, L_p.
  std::vector<uint32_t> block_widths() const {
    std::vector<uint32_t> w = lengths;
    w.push_back(tail_len());
    return w;
  }

  void validate() const {
    if (lengths.empty()) throw std::invalid_argument("HeaderConfig: n_v must be >= 1");
    for (uint32_t l : lengths)
      if (l == 0) throw std::invalid_argument("HeaderConfig: subvector lengths must be >= 1");
  }
};

/// Spatio-temporal slot (r, t): generation identifier binding packets to a
/// sink and a time slot. Carried out of band; never mixed into coded bodies.
struct Sts {
  uint32_t sink_index = 0;
  uint64_t slot_index = 0;
  friend bool operator==(const Sts&, const Sts&) = default;
};

struct SourcePacket {
  Sts sts;
  std::vector<uint32_t> indices;  // j_1..j_nv, 1-based, j_l in 1..L_l
  gf2::BitVec payload;
  gf2::BitVec hash;

  friend bool operator==(const SourcePacket&, const SourcePacket&) = default;
};

struct CodedPacket {
  Sts sts;
  gf2::BitVec body;  // length L_x
};

/// Keyed 64-bit avalanche mixer over the payload bits, truncated to
/// hash_len bits. Pure and fixed-keyed so sources and sink always agree.
gf2::BitVec hash_payload(const gf2::BitVec& payload, uint32_t hash_len);

/// True iff the trailing hash_len bits of `candidate` (length L_p) equal the
/// hash of its leading payload_len bits.
bool check_hash(const gf2::BitVec& candidate, const HeaderConfig& cfg);

/// Flat wire form x = (e_{j_1}, ..., e_{j_nv}, pi, h) of length L_x.
gf2::BitVec flatten(const SourcePacket& p, const HeaderConfig& cfg);

/// Inverse of flatten. Returns nullopt when some header block does not hold
/// exactly one set bit (the vector is a nontrivial mixture) or the hash is
/// inconsistent with the payload.
std::optional<SourcePacket> parse(const gf2::BitVec& v, const HeaderConfig& cfg,
                                  const Sts& sts = {});

/// Builds a packet from indices and payload, filling the hash field.
SourcePacket make_source_packet(const HeaderConfig& cfg, const Sts& sts,
                                const std::vector<uint32_t>& indices,
                                const gf2::BitVec& payload);

}  // namespace necorpia

#endif
