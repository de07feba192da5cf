#ifndef NECORPIA_ENCODER_HPP
#define NECORPIA_ENCODER_HPP

#include <cstdint>
#include <vector>

#include "necorpia/gf2.hpp"
#include "necorpia/packet.hpp"
#include "necorpia/rng.hpp"

namespace necorpia {

/// The g source packets sharing one STS; flattened they form the g x L_x
/// matrix X.
struct Generation {
  HeaderConfig cfg;
  Sts sts;
  std::vector<SourcePacket> sources;

  uint32_t g() const { return static_cast<uint32_t>(sources.size()); }
  gf2::BinaryMatrix flatten_matrix() const;
};

/// Source-side encoding: each j_l drawn independently uniform on 1..L_l,
/// hash field filled from the payload.
SourcePacket random_source(const HeaderConfig& cfg, const Sts& sts,
                           const gf2::BitVec& payload, Rng& rng);

/// GF(2) linear combination of equal-length vectors; coeffs.size() must
/// equal packets.size().
gf2::BitVec mix(const std::vector<gf2::BitVec>& packets, const gf2::BitVec& coeffs);

/// Relay-side recombination of a generation into one coded packet carrying
/// the generation's slot identifier.
CodedPacket encode_mix(const Generation& gen, const gf2::BitVec& coeffs);

/// Uniform draw over invertible g x g GF(2) matrices via rejection sampling
/// (acceptance probability prod_{k=1..g}(1 - 2^-k), so under four attempts
/// expected at any g). `attempts`, when given, receives the number of draws.
gf2::BinaryMatrix random_full_rank_matrix(uint32_t g, Rng& rng, uint32_t* attempts = nullptr);

/// Generation with uniformly random header indices and linearly independent
/// rows (payloads are redrawn in the vanishingly rare dependent case, which
/// mirrors the unique-identifier payloads used for evaluation).
Generation random_generation(const HeaderConfig& cfg, const Sts& sts, uint32_t g, Rng& rng);

}  // namespace necorpia

#endif
