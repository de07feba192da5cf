#include "necorpia/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "necorpia/analytics.hpp"

namespace necorpia::netsim {

namespace {

struct GraphMetrics {
  bool connected = false;
  uint32_t diameter = 0;
  uint32_t min_degree = 0;
};

std::vector<std::vector<uint32_t>> adjacency_at(const std::vector<std::array<double, 2>>& pos,
                                                double r2) {
  const uint32_t n = static_cast<uint32_t>(pos.size());
  std::vector<std::vector<uint32_t>> adj(n);
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = i + 1; j < n; ++j) {
      const double dx = pos[i][0] - pos[j][0];
      const double dy = pos[i][1] - pos[j][1];
      if (dx * dx + dy * dy <= r2) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  return adj;
}

GraphMetrics metrics_of(const std::vector<std::vector<uint32_t>>& adj) {
  const uint32_t n = static_cast<uint32_t>(adj.size());
  GraphMetrics m;
  m.min_degree = n;
  for (const auto& nb : adj) m.min_degree = std::min(m.min_degree, static_cast<uint32_t>(nb.size()));
  std::vector<uint32_t> dist(n);
  uint32_t diameter = 0;
  for (uint32_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), n);
    std::deque<uint32_t> queue{s};
    dist[s] = 0;
    uint32_t seen = 1;
    while (!queue.empty()) {
      const uint32_t u = queue.front();
      queue.pop_front();
      for (uint32_t v : adj[u]) {
        if (dist[v] == n) {
          dist[v] = dist[u] + 1;
          diameter = std::max(diameter, dist[v]);
          queue.push_back(v);
          ++seen;
        }
      }
    }
    if (seen != n) return m;  // disconnected
  }
  m.connected = true;
  m.diameter = diameter;
  return m;
}

}  // namespace

Topology generate_topology(uint32_t n_sensors, uint64_t seed, uint32_t target_diameter,
                           uint32_t min_degree_required, uint32_t max_attempts) {
  if (n_sensors < 20) throw std::invalid_argument("generate_topology: need N >= 20");
  const uint32_t n = n_sensors + 1;
  for (uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = Rng::derive(seed, attempt);
    std::vector<std::array<double, 2>> pos(n);
    for (auto& p : pos) p = {rng.next_double(), rng.next_double()};

    // The diameter only changes at pairwise distances, so search the sorted
    // distance list for the largest radius whose graph has the target
    // diameter; degree is maximal there.
    std::vector<double> d2;
    d2.reserve(size_t{n} * (n - 1) / 2);
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = i + 1; j < n; ++j) {
        const double dx = pos[i][0] - pos[j][0];
        const double dy = pos[i][1] - pos[j][1];
        d2.push_back(dx * dx + dy * dy);
      }
    std::sort(d2.begin(), d2.end());
    d2.erase(std::unique(d2.begin(), d2.end()), d2.end());

    auto diameter_at = [&](size_t idx) -> uint32_t {
      const auto adj = adjacency_at(pos, d2[idx]);
      const auto m = metrics_of(adj);
      return m.connected ? m.diameter : UINT32_MAX;
    };

    // Smallest index whose diameter drops strictly below the target.
    size_t lo = 0, hi = d2.size();
    while (lo < hi) {
      const size_t mid = lo + (hi - lo) / 2;
      if (diameter_at(mid) < target_diameter)
        hi = mid;
      else
        lo = mid + 1;
    }
    if (lo == 0) continue;  // already below target at the smallest radius
    const size_t pick = lo - 1;
    if (diameter_at(pick) != target_diameter) continue;  // diameter skipped the target

    auto adj = adjacency_at(pos, d2[pick]);
    const auto m = metrics_of(adj);
    if (!m.connected || m.min_degree < min_degree_required) continue;

    Topology topo;
    topo.n_nodes = n;
    topo.radius = std::sqrt(d2[pick]);
    topo.diameter = m.diameter;
    topo.min_degree = m.min_degree;
    topo.positions = std::move(pos);
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    topo.neighbors = std::move(adj);
    return topo;
  }
  throw TopologyError("generate_topology: no placement met the diameter/degree constraints");
}

double SimResult::mean_nonzero_coeffs() const {
  if (tx_coeffs.empty()) return 0.0;
  double s = 0.0;
  for (const auto& v : tx_coeffs) s += v.popcount();
  return s / static_cast<double>(tx_coeffs.size());
}

namespace {

struct NodeState {
  std::vector<gf2::BitVec> buffer;       // innovative vectors, arrival order
  std::vector<gf2::BitVec> basis;        // reduced for the innovation test
  std::vector<uint32_t> basis_pivot;
  uint32_t pending = 0;                  // combos scheduled for the next slot

  bool receive_innovative(const gf2::BitVec& v) {
    gf2::BitVec reduced = v;
    for (size_t i = 0; i < basis.size(); ++i)
      if (reduced.get(basis_pivot[i])) reduced.xor_with(basis[i]);
    const auto lead = reduced.first_set_bit();
    if (!lead) return false;
    basis.push_back(std::move(reduced));
    basis_pivot.push_back(*lead);
    return true;
  }

  uint32_t rank() const { return static_cast<uint32_t>(basis.size()); }
};

uint32_t draw_tx_count(double d, Rng& rng) {
  const double floor_d = std::floor(d);
  uint32_t c = static_cast<uint32_t>(floor_d);
  if (rng.next_double() < d - floor_d) ++c;
  return c;
}

gf2::BitVec random_combination(const std::vector<gf2::BitVec>& buffer, uint32_t g, Rng& rng) {
  for (int tries = 0; tries < 64; ++tries) {
    gf2::BitVec out(g);
    for (const auto& v : buffer)
      if (rng.bit()) out.xor_with(v);
    if (!out.is_zero()) return out;
  }
  return buffer.front();
}

}  // namespace

SimResult run_sts(const Topology& topo, const SimConfig& cfg) {
  const uint32_t n_sensors = topo.n_nodes - 1;
  if (cfg.g == 0 || cfg.g > n_sensors) throw std::invalid_argument("run_sts: need 1 <= g <= N");
  Rng rng(cfg.seed);

  // g distinct source nodes among the sensors, then processed in index order.
  std::vector<uint32_t> all(n_sensors);
  std::iota(all.begin(), all.end(), 0u);
  for (uint32_t i = 0; i < cfg.g; ++i) {
    const uint32_t j = i + static_cast<uint32_t>(rng.uniform_below(n_sensors - i));
    std::swap(all[i], all[j]);
  }
  std::vector<uint32_t> sources(all.begin(), all.begin() + cfg.g);
  std::sort(sources.begin(), sources.end());

  std::vector<NodeState> nodes(topo.n_nodes);
  const uint32_t sink = topo.sink();
  SimResult res;

  for (uint32_t i = 0; i < cfg.g; ++i) {
    NodeState& node = nodes[sources[i]];
    const gf2::BitVec own = gf2::BitVec::canonical(cfg.g, i);
    node.receive_innovative(own);
    node.buffer.push_back(own);
    node.pending += draw_tx_count(cfg.forwarding_factor, rng);
  }

  const uint64_t slot_limit = uint64_t{cfg.slot_limit_factor} * topo.diameter;
  for (uint64_t slot = 1;; ++slot) {
    if (slot > slot_limit) {
      res.hit_slot_limit = true;
      res.slots_elapsed = slot - 1;
      break;
    }

    std::vector<std::pair<uint32_t, gf2::BitVec>> txs;
    for (uint32_t node = 0; node < topo.n_nodes; ++node) {
      NodeState& st = nodes[node];
      for (uint32_t k = 0; k < st.pending; ++k)
        txs.emplace_back(node, random_combination(st.buffer, cfg.g, rng));
      st.pending = 0;
    }
    if (txs.empty()) {
      res.stalled = true;
      res.slots_elapsed = slot - 1;
      break;
    }

    for (auto& [sender, vec] : txs) {
      ++res.total_transmissions;
      for (uint32_t nb : topo.neighbors[sender]) {
        NodeState& receiver = nodes[nb];
        if (!receiver.receive_innovative(vec)) continue;
        if (nb == sink) continue;  // the sink never forwards
        if (cfg.buffer_cap > 0 && receiver.buffer.size() >= cfg.buffer_cap)
          receiver.buffer.erase(receiver.buffer.begin());
        receiver.buffer.push_back(vec);
        receiver.pending += draw_tx_count(cfg.forwarding_factor, rng);
      }
      res.tx_coeffs.push_back(std::move(vec));
    }

    if (nodes[sink].rank() == cfg.g) {
      res.decoded = true;
      res.slots_elapsed = slot;
      break;
    }
  }

  account_headers(res, cfg, n_sensors);
  return res;
}

std::vector<double> nonzero_coefficient_distribution(const std::vector<SimResult>& results) {
  uint32_t max_count = 0;
  uint64_t total = 0;
  for (const auto& r : results)
    for (const auto& v : r.tx_coeffs) {
      max_count = std::max(max_count, v.popcount());
      ++total;
    }
  std::vector<double> pmf(max_count + 1, 0.0);
  if (total == 0) return pmf;
  for (const auto& r : results)
    for (const auto& v : r.tx_coeffs) pmf[v.popcount()] += 1.0;
  for (double& p : pmf) p /= static_cast<double>(total);
  return pmf;
}

uint32_t cope_identifier_bits(uint32_t g_max, double p_c) {
  const double pairs = 0.5 * static_cast<double>(g_max) * (static_cast<double>(g_max) - 1.0);
  if (pairs <= 0.0) return 0;
  uint32_t b = 0;
  while (pairs * std::ldexp(1.0, -static_cast<int>(b)) > p_c) ++b;
  return b;
}

double cope_header_bits(uint32_t g_max, double p_c, const std::vector<SimResult>& results) {
  const uint32_t b = cope_identifier_bits(g_max, p_c);
  double mean = 0.0;
  uint64_t total = 0;
  for (const auto& r : results)
    for (const auto& v : r.tx_coeffs) {
      mean += v.popcount();
      ++total;
    }
  if (total == 0) return 0.0;
  return (mean / static_cast<double>(total)) * static_cast<double>(b);
}

double plain_nc_header_bits(uint32_t n_sensors) { return static_cast<double>(n_sensors); }

namespace {

uint32_t smallest_hash_len(uint32_t g_max, const std::vector<uint32_t>& lengths, double p_c) {
  for (uint32_t lh = 0; lh <= 128; ++lh) {
    if (analytics::expected_error_bound(g_max, lengths, 2, lh,
                                        analytics::PmfSource::Analytic) <= p_c)
      return lh;
  }
  throw std::runtime_error("size_necorpia_header: no hash length met p_c");
}

}  // namespace

NecorpiaHeaderSizing size_necorpia_header(uint32_t g_max, uint32_t nv, double p_c,
                                          double nb_max) {
  if (nv < 1 || nv > 2)
    throw std::invalid_argument("size_necorpia_header: analytic sizing needs n_v in {1, 2}");
  for (uint32_t len = 1; len <= 1u << 20; ++len) {
    const std::vector<uint32_t> lengths(nv, len);
    if (analytics::expected_terminal_branches(g_max, lengths, 2,
                                              analytics::PmfSource::Analytic) > nb_max)
      continue;
    NecorpiaHeaderSizing s;
    s.lengths = lengths;
    s.hash_len = smallest_hash_len(g_max, lengths, p_c);
    s.total_bits = nv * len + s.hash_len;
    return s;
  }
  throw std::runtime_error("size_necorpia_header: no block length met the branch budget");
}

NecorpiaHeaderSizing size_necorpia_header_fixed(uint32_t g_max,
                                                const std::vector<uint32_t>& lengths,
                                                double p_c) {
  if (lengths.empty() || lengths.size() > 2)
    throw std::invalid_argument("size_necorpia_header_fixed: analytic sizing needs n_v in {1, 2}");
  NecorpiaHeaderSizing s;
  s.lengths = lengths;
  s.hash_len = smallest_hash_len(g_max, lengths, p_c);
  s.total_bits = std::accumulate(lengths.begin(), lengths.end(), 0u) + s.hash_len;
  return s;
}

double entropy_coded_bits(uint32_t length, uint32_t k) {
  const double l = length;
  const double lchoose =
      (std::lgamma(l + 1.0) - std::lgamma(k + 1.0) - std::lgamma(l - k + 1.0)) / std::log(2.0);
  return lchoose + std::log2(l + 1.0);
}

void account_headers(SimResult& result, const SimConfig& cfg, uint32_t n_sensors) {
  if (result.tx_coeffs.empty()) {
    result.header_bits = 0.0;
    result.header_bits_entropy_coded = 0.0;
    return;
  }
  const double n_tx = static_cast<double>(result.tx_coeffs.size());
  switch (cfg.scheme) {
    case HeaderScheme::PlainNc: {
      result.header_bits = plain_nc_header_bits(n_sensors);
      double coded = 0.0;
      for (const auto& v : result.tx_coeffs)
        coded += entropy_coded_bits(n_sensors, v.popcount());
      result.header_bits_entropy_coded = coded / n_tx;
      return;
    }
    case HeaderScheme::Cope: {
      // Identifier width is a protocol-wide constant sized for the largest
      // possible number of active nodes (all N sensors), like COPE's fixed
      // 32-bit hashes; only the realized mixing degree varies with g.
      const uint32_t b = cope_identifier_bits(n_sensors, cfg.p_c);
      double bits = 0.0;
      for (const auto& v : result.tx_coeffs) bits += static_cast<double>(v.popcount()) * b;
      result.header_bits = bits / n_tx;
      // The identifier list is already compact; no entropy coding applied.
      result.header_bits_entropy_coded = result.header_bits;
      return;
    }
    case HeaderScheme::NecorpiaFixed:
    case HeaderScheme::NecorpiaAdaptive: {
      const NecorpiaHeaderSizing sizing =
          cfg.scheme == HeaderScheme::NecorpiaFixed
              ? size_necorpia_header_fixed(cfg.g, cfg.scheme_lengths, cfg.p_c)
              : size_necorpia_header(cfg.g, cfg.scheme_nv, cfg.p_c, cfg.scheme_nb_max);
      result.header_bits = sizing.total_bits;

      // Per-source random block indices; a mixed packet's header bit count
      // is the number of indices hit an odd number of times per block.
      Rng rng = Rng::derive(cfg.seed, 0x68656164u);
      const uint32_t nv = static_cast<uint32_t>(sizing.lengths.size());
      std::vector<std::vector<uint32_t>> index(cfg.g, std::vector<uint32_t>(nv));
      for (uint32_t s = 0; s < cfg.g; ++s)
        for (uint32_t l = 0; l < nv; ++l)
          index[s][l] = static_cast<uint32_t>(rng.uniform_below(sizing.lengths[l]));

      uint32_t header_len = 0;
      for (uint32_t l : sizing.lengths) header_len += l;
      double coded = 0.0;
      std::vector<uint32_t> hits;
      for (const auto& v : result.tx_coeffs) {
        uint32_t k = 0;
        for (uint32_t l = 0; l < nv; ++l) {
          hits.assign(sizing.lengths[l], 0);
          for (uint32_t s = 0; s < cfg.g; ++s)
            if (v.get(s)) hits[index[s][l]] ^= 1u;
          for (uint32_t h : hits) k += h;
        }
        coded += entropy_coded_bits(header_len, k) + sizing.hash_len;
      }
      result.header_bits_entropy_coded = coded / n_tx;
      return;
    }
  }
  throw std::logic_error("account_headers: unknown scheme");
}

}  // namespace necorpia::netsim
