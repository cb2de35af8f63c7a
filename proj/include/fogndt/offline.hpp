#pragma once

#include <stdexcept>

#include "fogndt/baselines.hpp"
#include "fogndt/model.hpp"

namespace fogndt {

/// Regime thresholds of the pipelined schemes:
///   mu1  = K (1 - r/m)^+ / (K M + r (m - 1))
///   mu2  = (1 - r/m)^+
///   mu2' = K (1 - r/m)^+ / (K - 1)      (+inf for K = 1, 0 when r >= m)
/// with m = min(M, K).
template <class Scalar>
RegimeBreakpoints<Scalar> breakpoints(const BasicNetworkConfig<Scalar>& cfg) {
  const Scalar m(cfg.spatial_dof());
  const Scalar K(cfg.users());
  const Scalar M(cfg.ens());
  const Scalar& r = cfg.fronthaul_scaling();
  const Scalar slack = positive_part(Scalar(Scalar(1) - r / m));

  RegimeBreakpoints<Scalar> bp;
  bp.mu1 = K * slack / (K * M + r * (m - Scalar(1)));
  bp.mu2 = slack;
  if (slack == Scalar(0)) {
    bp.mu2_prime_raw = ExtendedReal<Scalar>(Scalar(0));
  } else if (cfg.users() == 1) {
    bp.mu2_prime_raw = ExtendedReal<Scalar>::infinity();
  } else {
    bp.mu2_prime_raw = ExtendedReal<Scalar>(K * slack / (K - Scalar(1)));
  }
  bp.mu2_prime_clamped = bp.mu2_prime_raw.clamped(Scalar(1));
  return bp;
}

/// K (1 - mu M) / r: the coordination/C-RAN mix with alpha = mu M, which is
/// fronthaul-limited on [0, mu1].
template <class Scalar>
Scalar fronthaul_limited_ndt(const BasicNetworkConfig<Scalar>& cfg, const Scalar& mu) {
  return Scalar(cfg.users()) * (Scalar(1) - mu * Scalar(cfg.ens())) / cfg.fronthaul_scaling();
}

/// Evaluates one regime's closed form at cfg's mu, whether or not mu lies
/// in that regime. Throws std::domain_error for an empty intermediate
/// interval (mu1 == mu2).
template <class Scalar>
Scalar offline_regime_ndt(const BasicNetworkConfig<Scalar>& cfg, const RegimeBreakpoints<Scalar>& bp,
                          Regime regime) {
  const Scalar& mu = cfg.cache_fraction();
  const Scalar plateau = en_cooperation_ndt(cfg).edge;
  switch (regime) {
    case Regime::LowCache:
      return fronthaul_limited_ndt(cfg, mu);
    case Regime::Intermediate: {
      if (!(bp.mu2 > bp.mu1)) throw std::domain_error("offline intermediate regime is empty");
      const Scalar start = fronthaul_limited_ndt(cfg, bp.mu1);
      return (plateau - start) * ((mu - bp.mu1) / (bp.mu2 - bp.mu1)) + start;
    }
    case Regime::FullCaching:
      return plateau;
  }
  throw std::logic_error("unhandled regime");
}

template <class Scalar>
Scalar offline_achievable(const BasicNetworkConfig<Scalar>& cfg, const RegimeBreakpoints<Scalar>& bp) {
  return offline_regime_ndt(cfg, bp, classify(cfg.cache_fraction(), bp, Scheme::Offline));
}

/// Achievable offline NDT of pipelined delivery: fronthaul-limited on
/// [0, mu1], linear on [mu1, mu2], K/min(M,K) on [mu2, 1].
template <class Scalar>
Scalar offline_achievable(const BasicNetworkConfig<Scalar>& cfg) {
  return offline_achievable(cfg, breakpoints(cfg));
}

/// Same value rebuilt from explicit scheme mixes: coordination/C-RAN with
/// alpha = mu M below mu1, cooperation/C-RAN with alpha = mu above mu2.
/// Throws std::domain_error strictly inside (mu1, mu2).
template <class Scalar>
Scalar offline_achievable_via_timeshare(const BasicNetworkConfig<Scalar>& cfg) {
  const auto bp = breakpoints(cfg);
  const Scalar& mu = cfg.cache_fraction();
  const auto cran = cran_ndt(cfg);
  if (mu >= bp.mu2) return pipelined(time_share(en_cooperation_ndt(cfg), cran, mu));
  if (mu <= bp.mu1) {
    return pipelined(time_share(en_coordination_ndt(cfg), cran, Scalar(mu * Scalar(cfg.ens()))));
  }
  throw std::domain_error("no single time-share construction inside (mu1, mu2) for " + describe(cfg));
}

/// Cut-set term for l edge outputs plus M - l caches and fronthaul outputs:
/// (K - (M-l)(K-l) mu) / (l + r). May be negative.
template <class Scalar>
Scalar offline_cut_set_term(const BasicNetworkConfig<Scalar>& cfg, int l) {
  const Scalar cached = Scalar((cfg.ens() - l) * (cfg.users() - l)) * cfg.cache_fraction();
  return (Scalar(cfg.users()) - cached) / (Scalar(l) + cfg.fronthaul_scaling());
}

/// Lower bound on the minimum offline NDT: the largest cut-set term over
/// l = 0..min(M,K), and never below K/min(M,K).
template <class Scalar>
Scalar offline_lower_bound(const BasicNetworkConfig<Scalar>& cfg) {
  Scalar best = en_cooperation_ndt(cfg).edge;
  for (int l = 0; l <= cfg.spatial_dof(); ++l) {
    const Scalar term = offline_cut_set_term(cfg, l);
    if (term > best) best = term;
  }
  return best;
}

template <class Scalar>
struct OfflineGapPoint {
  Scalar achievable{0};
  Scalar lower_bound{0};
  Scalar ratio{0};
  Regime regime = Regime::LowCache;
  /// mu in [0, mu1] or [mu2, 1], where the two must coincide.
  bool tightness_required = false;
  bool tight = false;
  bool ratio_below_two = false;
  bool ordered = false;

  bool holds() const { return ordered && ratio_below_two && (!tightness_required || tight); }
};

template <class Scalar>
OfflineGapPoint<Scalar> evaluate_offline_gap(const BasicNetworkConfig<Scalar>& cfg,
                                             const RegimeBreakpoints<Scalar>& bp) {
  OfflineGapPoint<Scalar> pt;
  const Scalar& mu = cfg.cache_fraction();
  pt.achievable = offline_achievable(cfg, bp);
  pt.lower_bound = offline_lower_bound(cfg);
  pt.ratio = pt.achievable / pt.lower_bound;
  pt.regime = classify(mu, bp, Scheme::Offline);
  pt.tightness_required = mu <= bp.mu1 || mu >= bp.mu2;
  pt.tight = nearly_equal(pt.achievable, pt.lower_bound);
  pt.ratio_below_two = pt.achievable < Scalar(2) * pt.lower_bound;
  pt.ordered = pt.lower_bound <= pt.achievable || nearly_equal(pt.achievable, pt.lower_bound);
  return pt;
}

template <class Scalar>
OfflineGapPoint<Scalar> evaluate_offline_gap(const BasicNetworkConfig<Scalar>& cfg) {
  return evaluate_offline_gap(cfg, breakpoints(cfg));
}

}  // namespace fogndt
