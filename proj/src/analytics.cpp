#include "necorpia/analytics.hpp"

#include <cmath>

namespace necorpia::analytics {

std::vector<double> occupancy_pmf(uint32_t g, double boxes) {
  if (boxes < 1) throw std::invalid_argument("occupancy_pmf: need at least one box");
  const uint32_t kmax =
      boxes < static_cast<double>(g) ? static_cast<uint32_t>(boxes) : g;
  std::vector<double> p(kmax + 1, 0.0);
  p[0] = 1.0;
  std::vector<double> next(kmax + 1, 0.0);
  for (uint32_t n = 0; n < g; ++n) {
    std::fill(next.begin(), next.end(), 0.0);
    const uint32_t upto = std::min(n + 1, kmax);
    for (uint32_t k = 0; k <= upto; ++k) {
      double v = p[k] * (static_cast<double>(k) / boxes);
      if (k > 0) v += p[k - 1] * ((boxes - static_cast<double>(k) + 1.0) / boxes);
      next[k] = v;
    }
    p.swap(next);
  }
  return p;
}

Rho2Law rho2_law_nv1(uint32_t g, uint32_t l1) {
  const auto occ = occupancy_pmf(g, static_cast<double>(l1));
  Rho2Law law;
  law.pmf.assign(g + 1, 0.0);
  for (uint32_t k = 0; k < occ.size(); ++k) law.pmf[g - k] = occ[k];
  law.ccdf.assign(g + 1, 0.0);
  double tail = 0.0;
  for (uint32_t m = g + 1; m-- > 0;) {
    law.ccdf[m] = tail;
    tail += law.pmf[m];
  }
  return law;
}

JointRankPmfNv2 joint_rank_pmf_nv2(uint32_t g, uint32_t l1, uint32_t l2) {
  const auto f1 = occupancy_pmf(g, static_cast<double>(l1));
  const auto f12 = occupancy_pmf(g, static_cast<double>(l1) * static_cast<double>(l2));
  JointRankPmfNv2 joint;
  joint.g = g;
  joint.p.assign(f1.size(), {});
  for (uint32_t k1 = 0; k1 < f1.size(); ++k1) {
    auto& row = joint.p[k1];
    row.assign(g - k1 + 1, 0.0);
    if (f1[k1] == 0.0) continue;
    double slice = 0.0;
    for (uint32_t m = k1; m < f12.size(); ++m) slice += f12[m];
    if (slice <= 0.0) continue;
    for (uint32_t k2 = 0; k2 + k1 <= g; ++k2) {
      const uint32_t m = k1 + k2;
      row[k2] = m < f12.size() ? f1[k1] * f12[m] / slice : 0.0;
    }
  }
  return joint;
}

std::vector<double> JointRankPmfNv2::rho3_pmf() const {
  std::vector<double> pmf(g + 1, 0.0);
  for (uint32_t k1 = 0; k1 < p.size(); ++k1)
    for (uint32_t k2 = 0; k2 < p[k1].size(); ++k2) pmf[g - k1 - k2] += p[k1][k2];
  return pmf;
}

std::vector<double> JointRankPmfNv2::rho3_ccdf() const {
  const auto pmf = rho3_pmf();
  std::vector<double> ccdf(pmf.size(), 0.0);
  double tail = 0.0;
  for (uint32_t m = static_cast<uint32_t>(pmf.size()); m-- > 0;) {
    ccdf[m] = tail;
    tail += pmf[m];
  }
  return ccdf;
}

double JointRankPmfNv2::total() const {
  double s = 0.0;
  for (const auto& row : p)
    for (double v : row) s += v;
  return s;
}

double full_rank_upper_bound(uint32_t g, const std::vector<uint32_t>& lengths) {
  double boxes = 1.0;
  for (uint32_t l : lengths) boxes *= static_cast<double>(l);
  const auto occ = occupancy_pmf(g, boxes);
  return occ.size() > g ? occ[g] : 0.0;
}

double expect_over_profiles(uint32_t g, const std::vector<uint32_t>& lengths, PmfSource source,
                            const std::vector<RankProfile>& empirical,
                            const std::function<double(const RankProfile&)>& fn) {
  if (source == PmfSource::Empirical) {
    if (empirical.empty())
      throw std::invalid_argument("expect_over_profiles: empirical sample is empty");
    double acc = 0.0;
    for (const auto& prof : empirical) acc += fn(prof);
    return acc / static_cast<double>(empirical.size());
  }
  const uint32_t nv = static_cast<uint32_t>(lengths.size());
  if (nv == 1) {
    const auto occ = occupancy_pmf(g, static_cast<double>(lengths[0]));
    double acc = 0.0;
    for (uint32_t k = 0; k < occ.size(); ++k) {
      if (occ[k] == 0.0) continue;
      acc += occ[k] * fn(RankProfile{{k, g - k}});
    }
    return acc;
  }
  if (nv == 2) {
    const auto joint = joint_rank_pmf_nv2(g, lengths[0], lengths[1]);
    double acc = 0.0;
    for (uint32_t k1 = 0; k1 < joint.p.size(); ++k1)
      for (uint32_t k2 = 0; k2 < joint.p[k1].size(); ++k2) {
        const double w = joint.p[k1][k2];
        if (w == 0.0) continue;
        acc += w * fn(RankProfile{{k1, k2, g - k1 - k2}});
      }
    return acc;
  }
  throw std::invalid_argument(
      "analytic rank law is only available for n_v <= 2; pass PmfSource::Empirical");
}

double expected_branches(uint32_t g, const std::vector<uint32_t>& lengths, uint32_t q,
                         PmfSource source, const std::vector<RankProfile>& empirical) {
  return expect_over_profiles(g, lengths, source, empirical,
                              [q](const RankProfile& prof) {
                                return branch_bound<double>(prof, q).total;
                              });
}

double expected_terminal_branches(uint32_t g, const std::vector<uint32_t>& lengths, uint32_t q,
                                  PmfSource source, const std::vector<RankProfile>& empirical) {
  return expect_over_profiles(g, lengths, source, empirical,
                              [q](const RankProfile& prof) {
                                return branch_bound<double>(prof, q).terminal;
                              });
}

double decoding_error_prob(double n_w, double g, uint32_t q, uint32_t hash_len) {
  const double surplus = n_w - g;
  if (surplus <= 0.0) return 0.0;
  const double log_miss = -static_cast<double>(hash_len) * std::log(static_cast<double>(q));
  // 1 - (1 - p)^surplus with p = q^-L_h, kept accurate for tiny p.
  return -std::expm1(surplus * std::log1p(-std::exp(log_miss)));
}

double expected_error_bound(uint32_t g, const std::vector<uint32_t>& lengths, uint32_t q,
                            uint32_t hash_len, PmfSource source,
                            const std::vector<RankProfile>& empirical) {
  return expect_over_profiles(
      g, lengths, source, empirical, [g, q, hash_len](const RankProfile& prof) {
        const double nb_last = branch_bound<double>(prof, q).terminal;
        return decoding_error_prob(nb_last, static_cast<double>(g), q, hash_len);
      });
}

double cost_plain_nc(uint32_t g, uint64_t l_x, const CostConstants& consts) {
  return consts.k_rref * static_cast<double>(g) * static_cast<double>(g) *
         static_cast<double>(l_x);
}

double expected_cost_ratio(uint32_t g, const std::vector<uint32_t>& lengths, uint64_t l_x,
                           CostModel model, const CostConstants& consts, PmfSource source,
                           const std::vector<RankProfile>& empirical) {
  uint64_t header = 0;
  for (uint32_t l : lengths) header += l;
  if (header >= l_x) throw std::invalid_argument("expected_cost_ratio: L_x too small");
  const uint64_t l_p = l_x - header;
  const double a_nc = cost_plain_nc(g, l_x, consts);
  const double expected = expect_over_profiles(
      g, lengths, source, empirical, [&](const RankProfile& prof) {
        return model == CostModel::Sle
                   ? cost_sle<double>(prof, lengths, l_p, g, 2, consts)
                   : cost_lut<double>(prof, lengths, l_p, g, 2, consts);
      });
  return (a_nc + expected) / a_nc;
}

}  // namespace necorpia::analytics
