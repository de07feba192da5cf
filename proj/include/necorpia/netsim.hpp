#ifndef NECORPIA_NETSIM_HPP
#define NECORPIA_NETSIM_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "necorpia/gf2.hpp"
#include "necorpia/rng.hpp"

namespace necorpia::netsim {

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Random geometric graph on the unit square: N sensor nodes plus a sink
/// (index N), connected below radius r, with r tuned so the diameter is
/// exactly the target and the minimum degree exceeds 2.
struct Topology {
  uint32_t n_nodes = 0;  // N + 1, sink last
  double radius = 0.0;
  uint32_t diameter = 0;
  uint32_t min_degree = 0;
  std::vector<std::array<double, 2>> positions;
  std::vector<std::vector<uint32_t>> neighbors;  // sorted adjacency lists

  uint32_t sink() const { return n_nodes - 1; }
};

Topology generate_topology(uint32_t n_sensors, uint64_t seed, uint32_t target_diameter = 10,
                           uint32_t min_degree_required = 3, uint32_t max_attempts = 64);

enum class HeaderScheme { PlainNc, Cope, NecorpiaFixed, NecorpiaAdaptive };

struct SimConfig {
  uint32_t g = 0;
  double forwarding_factor = 1.5;  // d
  double p_c = 1e-6;               // target residual error / collision probability
  HeaderScheme scheme = HeaderScheme::PlainNc;
  uint32_t scheme_nv = 2;                  // NeCoRPIA schemes
  std::vector<uint32_t> scheme_lengths;    // NecorpiaFixed block lengths
  double scheme_nb_max = 1e3;              // NecorpiaAdaptive terminal-branch budget
  uint32_t buffer_cap = 0;                 // G_B; 0 = unlimited
  uint64_t seed = 1;
  uint32_t slot_limit_factor = 50;         // limit = factor * diameter
};

struct SimResult {
  bool decoded = false;
  bool hit_slot_limit = false;
  bool stalled = false;
  uint64_t slots_elapsed = 0;
  uint64_t total_transmissions = 0;
  // Coefficient vector (over the g sources) of every broadcast, in order.
  std::vector<gf2::BitVec> tx_coeffs;

  double mean_nonzero_coeffs() const;

  // Header accounting for the configured scheme.
  double header_bits = 0.0;
  double header_bits_entropy_coded = 0.0;
};

/// One spatio-temporal slot: g random sources flood the network with GF(2)
/// recombinations under a constant forwarding factor until the sink holds
/// full rank. Dynamics never read the header scheme; schemes only change
/// the post-hoc header accounting, so slots and transmissions are
/// bit-identical across schemes for a fixed seed.
SimResult run_sts(const Topology& topo, const SimConfig& cfg);

/// Empirical pmf of the per-transmission nonzero coefficient count.
std::vector<double> nonzero_coefficient_distribution(const std::vector<SimResult>& results);

/// COPE-style identifier width: smallest b with C(g_max, 2) 2^-b <= p_c
/// (birthday union bound over uniform identifiers).
uint32_t cope_identifier_bits(uint32_t g_max, double p_c);

/// Average COPE header length: identifiers only, one per mixed packet;
/// GF(2) coefficients are implicit.
double cope_header_bits(uint32_t g_max, double p_c, const std::vector<SimResult>& results);

double plain_nc_header_bits(uint32_t n_sensors);

struct NecorpiaHeaderSizing {
  std::vector<uint32_t> lengths;
  uint32_t hash_len = 0;
  uint32_t total_bits = 0;
};

/// Sizes a NeCoRPIA header for at most g_max sources: equal block lengths
/// grown until the expected terminal branch count stays within nb_max
/// (adaptive mode only), then the smallest hash with expected error bound
/// within p_c. Analytic sizing restricts n_v to 1 or 2.
NecorpiaHeaderSizing size_necorpia_header(uint32_t g_max, uint32_t nv, double p_c,
                                          double nb_max);
NecorpiaHeaderSizing size_necorpia_header_fixed(uint32_t g_max,
                                                const std::vector<uint32_t>& lengths,
                                                double p_c);

/// Ideal order-0 code length for a length-L header with k set bits:
/// log2 C(L, k) + log2(L + 1) (enumerative coding of the support).
double entropy_coded_bits(uint32_t length, uint32_t k);

/// Fills header_bits / header_bits_entropy_coded of `result` for the given
/// scheme. NeCoRPIA entropy accounting draws the per-source header indices
/// from a stream derived from (seed, salt), independent of the dynamics.
void account_headers(SimResult& result, const SimConfig& cfg, uint32_t n_sensors);

}  // namespace necorpia::netsim

#endif
