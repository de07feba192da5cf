#ifndef NECORPIA_EXPERIMENTS_HPP
#define NECORPIA_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "necorpia/analytics.hpp"
#include "necorpia/decoder.hpp"
#include "necorpia/encoder.hpp"
#include "necorpia/netsim.hpp"

namespace necorpia::experiments {

/// Packet shape used by the experiment runners: header blocks plus hash,
/// payload filling the rest of a fixed L_x (2048-bit packets by default).
HeaderConfig make_config(const std::vector<uint32_t>& lengths, uint32_t hash_len,
                         uint32_t packet_bits = 2048);

struct DecodeTrial {
  Generation generation;
  gf2::BinaryMatrix y;
  DecodeResult sle;
  DecodeResult lut;
  analytics::RankProfile profile;
  uint64_t true_recovered = 0;  // how many of the g sources appear in sle.recovered
  uint64_t phantoms = 0;        // recovered bodies that are not sources
};

/// Encodes a random generation with a random full-rank coding matrix and
/// runs both DeRPIA variants on it.
DecodeTrial run_decode_trial(const HeaderConfig& cfg, uint32_t g, uint64_t seed);

/// Monte-Carlo rank profiles: draws g random index tuples per trial and
/// reads the block ranks off the header matrix (payload rows are assumed
/// independent, as in the evaluation setup).
std::vector<analytics::RankProfile> sample_rank_profiles(uint32_t g,
                                                         const std::vector<uint32_t>& lengths,
                                                         uint32_t trials, uint64_t seed,
                                                         int threads);

// ---- analyze ----

std::string csv_pmf_rho1_analytic(const std::vector<uint32_t>& g_list, uint32_t l1);
std::string csv_pmf_rho1_empirical(const std::vector<uint32_t>& g_list, uint32_t l1,
                                   uint32_t trials, uint64_t seed, int threads);
std::string csv_ccdf_rho2(const std::vector<uint32_t>& g_list, uint32_t l1);
std::string csv_joint_nv2(uint32_t g, uint32_t l1, uint32_t l2);
std::string csv_ccdf_rho3(const std::vector<uint32_t>& g_list, uint32_t l1, uint32_t l2);
std::string csv_expected_branches(const std::vector<uint32_t>& g_list,
                                  const std::vector<uint32_t>& lengths);
std::string csv_error_bound(const std::vector<uint32_t>& g_list,
                            const std::vector<uint32_t>& lengths, uint32_t hash_len);

// ---- bench ----

std::string csv_cost_ratio_analytic(const std::vector<uint32_t>& g_list,
                                    const std::vector<uint32_t>& lengths, uint32_t packet_bits);

struct BenchResult {
  std::string csv;          // g,variant,ratio from instrumented decodes
  double seconds = 0.0;
  uint64_t decodes = 0;
};

BenchResult run_bench_empirical(const std::vector<uint32_t>& g_list,
                                const std::vector<uint32_t>& lengths, uint32_t packet_bits,
                                uint32_t trials, uint64_t seed, int threads);

// ---- simulate ----

struct SimulateParams {
  uint32_t n_sensors = 100;
  std::vector<uint32_t> g_list;
  uint32_t topologies = 10;
  double p_c = 1e-6;
  double nb_max = 1e3;
  uint32_t fixed_block_len = 60;  // the NecorpiaFixed curve
  uint64_t seed = 1;
  int threads = 1;
};

struct SimulateOutput {
  std::string header_csv;   // g,scheme,avg_header_bits,avg_header_bits_entropy_coded
  std::string nonzero_csv;  // g,avg_nonzero_coeffs
};

SimulateOutput run_header_comparison(const SimulateParams& params);

/// Parses `key = value` lines (with # comments) into SimulateParams fields:
/// N, g, topologies, pc, nb_max, fixed_len, seed, threads.
void apply_config_file(const std::string& path, SimulateParams& params);

// ---- demo / verify ----

struct DemoParams {
  std::vector<uint32_t> lengths{50, 50};
  uint32_t g = 30;
  uint32_t hash_len = 16;
  uint32_t packet_bits = 2048;
  uint64_t seed = 1;
  DecodeVariant variant = DecodeVariant::Sle;
};

int run_demo(const DemoParams& params, std::ostream& out);

int run_verify(std::ostream& out, bool quick);

}  // namespace necorpia::experiments

#endif
