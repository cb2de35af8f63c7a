#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "fogndt/offline.hpp"

namespace fogndt {

/// K (1 - mu M) / r + p mu / r: the low-cache value plus the expected cost of
/// proactively pushing a mu-fraction of each newly popular file.
template <class Scalar>
Scalar online_fronthaul_limited_ndt(const BasicNetworkConfig<Scalar>& cfg, const Scalar& mu) {
  return fronthaul_limited_ndt(cfg, mu) + cfg.churn_probability() * mu / cfg.fronthaul_scaling();
}

/// One online regime's closed form at cfg's mu. The intermediate line runs
/// from mu1 to the raw (unclamped) mu2'; with mu2' = +inf it is flat.
template <class Scalar>
Scalar online_regime_ndt(const BasicNetworkConfig<Scalar>& cfg, const RegimeBreakpoints<Scalar>& bp,
                         Regime regime) {
  const Scalar& mu = cfg.cache_fraction();
  const Scalar plateau = en_cooperation_ndt(cfg).edge;
  switch (regime) {
    case Regime::LowCache:
      return online_fronthaul_limited_ndt(cfg, mu);
    case Regime::Intermediate: {
      const Scalar start = online_fronthaul_limited_ndt(cfg, bp.mu1);
      if (bp.mu2_prime_raw.is_infinite()) return start;
      const Scalar& upper = bp.mu2_prime_raw.value();
      if (!(upper > bp.mu1)) throw std::domain_error("online intermediate regime is empty");
      return (plateau - start) * ((mu - bp.mu1) / (upper - bp.mu1)) + start;
    }
    case Regime::FullCaching:
      return plateau;
  }
  throw std::logic_error("unhandled regime");
}

template <class Scalar>
Scalar online_achievable(const BasicNetworkConfig<Scalar>& cfg, const RegimeBreakpoints<Scalar>& bp) {
  return online_regime_ndt(cfg, bp, classify(cfg.cache_fraction(), bp, Scheme::Online));
}

/// Long-term NDT of proactive online caching with pipelined delivery.
template <class Scalar>
Scalar online_achievable(const BasicNetworkConfig<Scalar>& cfg) {
  return online_achievable(cfg, breakpoints(cfg));
}

enum class OnlineBoundVariant {
  Basic,    ///< new-file term M mu / r
  Refined,  ///< new-file term maxed with the per-l cut-set expression
};

std::string_view to_string(OnlineBoundVariant variant);

/// Probability that the file arriving in a slot is among the K requests.
template <class Scalar>
Scalar new_file_request_probability(const BasicNetworkConfig<Scalar>& cfg) {
  return Scalar(cfg.users()) * cfg.churn_probability() / Scalar(cfg.library_size());
}

/// Cut-set term when one requested file is absent from every cache:
/// (K - (M-l)(K-l-1)^+ mu) / (l + r).
template <class Scalar>
Scalar online_cut_set_term(const BasicNetworkConfig<Scalar>& cfg, int l) {
  const int uncached_others = cfg.users() - l - 1 > 0 ? cfg.users() - l - 1 : 0;
  const Scalar cached = Scalar((cfg.ens() - l) * uncached_others) * cfg.cache_fraction();
  return (Scalar(cfg.users()) - cached) / (Scalar(l) + cfg.fronthaul_scaling());
}

/// Lower bound on the NDT of a slot whose new file is requested.
template <class Scalar>
Scalar new_file_slot_bound(const BasicNetworkConfig<Scalar>& cfg, OnlineBoundVariant variant) {
  Scalar best = Scalar(cfg.ens()) * cfg.cache_fraction() / cfg.fronthaul_scaling();
  if (variant == OnlineBoundVariant::Refined) {
    for (int l = 0; l <= cfg.spatial_dof(); ++l) {
      const Scalar term = online_cut_set_term(cfg, l);
      if (term > best) best = term;
    }
  }
  return best;
}

/// (1 - Kp/N)/2 * offline_lb + (Kp/N) * new_file_slot_bound, with the
/// computable offline lower bound standing in for the optimal offline NDT.
template <class Scalar>
Scalar online_lower_bound(const BasicNetworkConfig<Scalar>& cfg, OnlineBoundVariant variant,
                          const Scalar& offline_lb) {
  const Scalar q = new_file_request_probability(cfg);
  return (Scalar(1) - q) / Scalar(2) * offline_lb + q * new_file_slot_bound(cfg, variant);
}

template <class Scalar>
Scalar online_lower_bound(const BasicNetworkConfig<Scalar>& cfg, OnlineBoundVariant variant) {
  return online_lower_bound(cfg, variant, offline_lower_bound(cfg));
}

/// Relations between the online and offline achievable NDTs, one per range:
///   [0, mu1]     difference == p mu / r
///   [mu1, mu2]   difference <= p mu / r
///   [mu2, mu2']  difference <= 3 + 2p / r
///   [mu2', 1]    difference == 0
enum class GapRelation { LowCacheIdentity, IntermediateBound, ExtendedBound, FullCachingIdentity };

std::string_view to_string(GapRelation relation);

template <class Scalar>
struct GapRelationCheck {
  GapRelation relation = GapRelation::LowCacheIdentity;
  Scalar bound{0};
  bool identity = false;
  bool holds = false;
};

template <class Scalar>
struct OnlineOfflineGap {
  Scalar difference{0};
  Regime regime = Regime::LowCache;
  /// Every relation whose closed range contains mu.
  std::vector<GapRelationCheck<Scalar>> checks;

  bool holds() const {
    for (const auto& c : checks) {
      if (!c.holds) return false;
    }
    return true;
  }
};

template <class Scalar>
OnlineOfflineGap<Scalar> evaluate_online_offline_gap(const BasicNetworkConfig<Scalar>& cfg,
                                                     const RegimeBreakpoints<Scalar>& bp,
                                                     const Scalar& offline_ach) {
  const Scalar& mu = cfg.cache_fraction();
  const Scalar& r = cfg.fronthaul_scaling();
  const Scalar& p = cfg.churn_probability();

  OnlineOfflineGap<Scalar> gap;
  gap.difference = online_achievable(cfg, bp) - offline_ach;
  gap.regime = classify(mu, bp, Scheme::Online);

  const auto add = [&](GapRelation relation, Scalar bound, bool identity) {
    const bool ok = identity ? nearly_equal(gap.difference, bound)
                             : (gap.difference <= bound || nearly_equal(gap.difference, bound));
    gap.checks.push_back({relation, std::move(bound), identity, ok});
  };
  const bool low_nonempty = bp.mu1 > Scalar(0);
  if (low_nonempty && mu <= bp.mu1) add(GapRelation::LowCacheIdentity, p * mu / r, true);
  if (bp.mu2 > bp.mu1 && mu >= bp.mu1 && mu <= bp.mu2) {
    add(GapRelation::IntermediateBound, p * mu / r, false);
  }
  const bool extended_nonempty = bp.mu2_prime_raw.is_infinite() || bp.mu2_prime_raw.value() > bp.mu2;
  if (extended_nonempty && mu >= bp.mu2 && mu <= bp.mu2_prime_raw) {
    add(GapRelation::ExtendedBound, Scalar(3) + Scalar(2) * p / r, false);
  }
  if (mu >= bp.mu2_prime_raw) add(GapRelation::FullCachingIdentity, Scalar(0), true);
  return gap;
}

template <class Scalar>
OnlineOfflineGap<Scalar> evaluate_online_offline_gap(const BasicNetworkConfig<Scalar>& cfg) {
  const auto bp = breakpoints(cfg);
  return evaluate_online_offline_gap(cfg, bp, offline_achievable(cfg, bp));
}

/// Like evaluate_online_offline_gap but throws CertificateViolation naming the
/// configuration and the failing relation.
template <class Scalar>
OnlineOfflineGap<Scalar> online_offline_gap(const BasicNetworkConfig<Scalar>& cfg) {
  auto gap = evaluate_online_offline_gap(cfg);
  for (const auto& c : gap.checks) {
    if (!c.holds) {
      throw CertificateViolation("online/offline gap relation " + std::string(to_string(c.relation)) +
                                 " violated at " + describe(cfg) + ": difference " +
                                 scalar_text(gap.difference) + (c.identity ? " != " : " > ") +
                                 scalar_text(c.bound));
    }
  }
  return gap;
}

template <class Scalar>
struct MultiplicativeGapPoint {
  /// 0 < r < min(M, K); points outside are skipped, not failed.
  bool precondition = false;
  Scalar achievable{0};
  Scalar bound{0};
  bool holds = true;
};

/// online_achievable < 2 offline_lower_bound + 6 + 4p/r.
template <class Scalar>
MultiplicativeGapPoint<Scalar> evaluate_multiplicative_gap(const BasicNetworkConfig<Scalar>& cfg,
                                                           const Scalar& online_ach,
                                                           const Scalar& offline_lb) {
  MultiplicativeGapPoint<Scalar> pt;
  const Scalar& r = cfg.fronthaul_scaling();
  pt.precondition = r < Scalar(cfg.spatial_dof());
  pt.achievable = online_ach;
  pt.bound = Scalar(2) * offline_lb + Scalar(6) + Scalar(4) * cfg.churn_probability() / r;
  pt.holds = !pt.precondition || pt.achievable < pt.bound;
  return pt;
}

template <class Scalar>
MultiplicativeGapPoint<Scalar> evaluate_multiplicative_gap(const BasicNetworkConfig<Scalar>& cfg) {
  return evaluate_multiplicative_gap(cfg, online_achievable(cfg), offline_lower_bound(cfg));
}

}  // namespace fogndt
