#ifndef NECORPIA_ANALYTICS_HPP
#define NECORPIA_ANALYTICS_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace necorpia::analytics {

/// Ranks of the echelon diagonal blocks, rho_1..rho_{nv+1}; they sum to g
/// and drive every complexity and error expression.
struct RankProfile {
  std::vector<uint32_t> rhos;

  uint32_t g() const {
    uint32_t s = 0;
    for (uint32_t r : rhos) s += r;
    return s;
  }
};

/// Occupancy law f(g, L, k): probability that g balls dropped uniformly in
/// L boxes occupy exactly k of them. Computed by the stable recurrence
/// p(n+1,k) = p(n,k) k/L + p(n,k-1) (L-k+1)/L rather than with Stirling
/// numbers, which overflow past g of about 25. Index k runs 0..min(g, L).
/// L is a real so products of box counts stay representable.
std::vector<double> occupancy_pmf(uint32_t g, double boxes);

struct Rho2Law {
  std::vector<double> pmf;   // P(rho_2 = k)
  std::vector<double> ccdf;  // P(rho_2 > k)
};

/// Distribution of the residual rank rho_2 for n_v = 1, deduced from the
/// occupancy law via rho_1 + rho_2 = g.
Rho2Law rho2_law_nv1(uint32_t g, uint32_t l1);

/// Approximate joint law of (rho_1, rho_2, rho_3) for n_v = 2:
/// P(k1, k2) proportional to f(g, L1, k1) f(g, L1 L2, k1 + k2), each rho_1
/// slice normalized so the rho_1 marginal is exactly the occupancy law.
/// The product form ignores rank deficiencies caused by index cycles, so it
/// is only accurate for moderate g (the histograms diverge around g = 80
/// with L1 = L2 = 50).
struct JointRankPmfNv2 {
  uint32_t g = 0;
  std::vector<std::vector<double>> p;  // p[k1][k2], k3 = g - k1 - k2

  std::vector<double> rho3_pmf() const;
  std::vector<double> rho3_ccdf() const;
  double total() const;
};

JointRankPmfNv2 joint_rank_pmf_nv2(uint32_t g, uint32_t l1, uint32_t l2);

/// Upper bound on the probability that the header blocks alone have full
/// rank g: f(g, L_1 ... L_nv, g).
double full_rank_upper_bound(uint32_t g, const std::vector<uint32_t>& lengths);

/// Branch-count bounds of the decoding tree for a realized rank profile:
/// N_b(l) = rho_1 (rho_2 + 1) ... (rho_l + 1), the terminal level multiplies
/// by q^{rho_{nv+1}}, and the total is their sum.
template <typename T>
struct BranchBoundT {
  std::vector<T> per_level;  // N_b(1)..N_b(nv)
  T terminal = 0;            // N_b(nv + 1)
  T total = 0;
};

template <typename T>
T pow_int(uint32_t base, uint32_t exp) {
  T r = 1;
  for (uint32_t i = 0; i < exp; ++i) r *= static_cast<T>(base);
  return r;
}

template <typename T>
BranchBoundT<T> branch_bound(const RankProfile& profile, uint32_t q) {
  if (profile.rhos.size() < 2) throw std::invalid_argument("branch_bound: need nv + 1 ranks");
  const uint32_t nv = static_cast<uint32_t>(profile.rhos.size()) - 1;
  BranchBoundT<T> b;
  T running = static_cast<T>(profile.rhos[0]);
  b.per_level.push_back(running);
  for (uint32_t l = 1; l < nv; ++l) {
    running *= static_cast<T>(profile.rhos[l] + 1);
    b.per_level.push_back(running);
  }
  b.terminal = running * pow_int<T>(q, profile.rhos[nv]);
  b.total = b.terminal;
  for (const T& v : b.per_level) b.total += v;
  return b;
}

enum class PmfSource { Analytic, Empirical };

/// E[N_b], the expected total branch count, under the analytic rank law
/// (n_v = 1 uses the occupancy pmf, n_v = 2 the approximate joint) or an
/// empirical profile sample. The analytic law is unavailable for n_v > 2;
/// callers must pass Empirical there.
double expected_branches(uint32_t g, const std::vector<uint32_t>& lengths, uint32_t q,
                         PmfSource source, const std::vector<RankProfile>& empirical = {});

/// E[N_b(nv + 1)], the expected terminal branch count.
double expected_terminal_branches(uint32_t g, const std::vector<uint32_t>& lengths, uint32_t q,
                                  PmfSource source,
                                  const std::vector<RankProfile>& empirical = {});

/// P_e = 1 - (1 - q^-L_h)^(n_w - g): probability that at least one of the
/// n_w - g spurious unmixing vectors slips past the hash.
double decoding_error_prob(double n_w, double g, uint32_t q, uint32_t hash_len);

/// Upper bound on the expected decoding error, replacing n_w by the
/// terminal branch bound and averaging over the rank law.
double expected_error_bound(uint32_t g, const std::vector<uint32_t>& lengths, uint32_t q,
                            uint32_t hash_len, PmfSource source,
                            const std::vector<RankProfile>& empirical = {});

struct CostConstants {
  double k_mul = 2;    // K_m, matrix product constant
  double k_rref = 3;   // K_R, elimination constant
  double k_check = 3;  // K_c, checksum constant
};

/// DeRPIA-SLE cost bound: per-level traversal budgets weighted by the
/// branch counts of the level above. Instantiate with double for
/// expectations or an integer type for exact identities.
template <typename T>
T cost_sle(const RankProfile& profile, const std::vector<uint32_t>& lengths, uint64_t l_p,
           uint32_t g, uint32_t q, const CostConstants& consts) {
  const uint32_t nv = static_cast<uint32_t>(lengths.size());
  if (profile.rhos.size() != nv + 1) throw std::invalid_argument("cost_sle: profile/lengths");
  const T km = static_cast<T>(consts.k_mul);
  const T kc = static_cast<T>(consts.k_check);
  const T lp = static_cast<T>(l_p);

  T total = 0;
  T branches_prev = 1;
  T rho_prefix = 0;
  for (uint32_t l = 0; l < nv; ++l) {
    const T len = static_cast<T>(lengths[l]);
    const T rho = static_cast<T>(profile.rhos[l]);
    T k_level;
    if (l == 0)
      k_level = len * rho * len;
    else
      k_level = km * len * rho_prefix + len * (static_cast<T>(l + 1) + (rho + 1) * len);
    total += branches_prev * k_level;
    branches_prev = (l == 0) ? rho : branches_prev * (rho + 1);
    rho_prefix += rho;
  }
  const T qpow = pow_int<T>(q, profile.rhos[nv]);
  const T rho_last = static_cast<T>(profile.rhos[nv]);
  const T k_terminal = km * static_cast<T>(g) * lp + static_cast<T>(nv - 1) * lp +
                       qpow * (km * rho_last * lp + lp + kc * lp);
  total += branches_prev * k_terminal;
  return total;
}

/// DeRPIA-LUT cost bound: one-off table construction plus per-branch
/// lookups that are linear rather than quadratic in the block length, and
/// the shared terminal term.
template <typename T>
T cost_lut(const RankProfile& profile, const std::vector<uint32_t>& lengths, uint64_t l_p,
           uint32_t g, uint32_t q, const CostConstants& consts) {
  const uint32_t nv = static_cast<uint32_t>(lengths.size());
  if (profile.rhos.size() != nv + 1) throw std::invalid_argument("cost_lut: profile/lengths");
  const T km = static_cast<T>(consts.k_mul);
  const T kc = static_cast<T>(consts.k_check);
  const T lp = static_cast<T>(l_p);

  T total = 0;
  T branches_prev = 1;
  T rho_prefix = 0;
  for (uint32_t l = 0; l < nv; ++l) {
    const T len = static_cast<T>(lengths[l]);
    const T rho = static_cast<T>(profile.rhos[l]);
    const T k_lu1 = rho + len * (rho * (rho + 1) / 2);
    const T k_lu2 = rho * (len + 1 + rho * len);
    const T k_lu3 = km * len * rho_prefix + len * (static_cast<T>(l + 1) + rho);
    total += k_lu1 + k_lu2 + branches_prev * k_lu3;
    branches_prev = (l == 0) ? rho : branches_prev * (rho + 1);
    rho_prefix += rho;
  }
  const T qpow = pow_int<T>(q, profile.rhos[nv]);
  const T rho_last = static_cast<T>(profile.rhos[nv]);
  const T k_terminal = km * static_cast<T>(g) * lp + static_cast<T>(nv - 1) * lp +
                       qpow * (km * rho_last * lp + lp + kc * lp);
  total += branches_prev * k_terminal;
  return total;
}

/// Plain network decoding cost A_NC = K_R g^2 L_x.
double cost_plain_nc(uint32_t g, uint64_t l_x, const CostConstants& consts);

enum class CostModel { Sle, Lut };

/// (A_NC + E[K_variant]) / A_NC where L_p = L_x - sum(L_l) and the
/// expectation runs over the rank law.
double expected_cost_ratio(uint32_t g, const std::vector<uint32_t>& lengths, uint64_t l_x,
                           CostModel model, const CostConstants& consts, PmfSource source,
                           const std::vector<RankProfile>& empirical = {});

/// Expectation of an arbitrary profile functional under the analytic rank
/// law (n_v <= 2) or an empirical sample; the primitive behind the
/// expected_* helpers.
double expect_over_profiles(uint32_t g, const std::vector<uint32_t>& lengths, PmfSource source,
                            const std::vector<RankProfile>& empirical,
                            const std::function<double(const RankProfile&)>& fn);

}  // namespace necorpia::analytics

#endif
