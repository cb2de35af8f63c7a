#pragma once

#include <stdexcept>

#include "fogndt/model.hpp"

namespace fogndt {

/// All ENs cache the whole library and zero-force jointly: (K/min(M,K), 0).
template <class Scalar>
NdtPair<Scalar> en_cooperation_ndt(const BasicNetworkConfig<Scalar>& cfg) {
  return {Scalar(cfg.users()) / Scalar(cfg.spatial_dof()), Scalar(0)};
}

/// Disjoint file fractions per EN with interference alignment: ((M+K-1)/M, 0).
template <class Scalar>
NdtPair<Scalar> en_coordination_ndt(const BasicNetworkConfig<Scalar>& cfg) {
  return {Scalar(cfg.ens() + cfg.users() - 1) / Scalar(cfg.ens()), Scalar(0)};
}

/// Cloud multicasts K files over the fronthaul, ENs zero-force:
/// (K/min(M,K), K/r).
template <class Scalar>
NdtPair<Scalar> cran_ndt(const BasicNetworkConfig<Scalar>& cfg) {
  return {Scalar(cfg.users()) / Scalar(cfg.spatial_dof()),
          Scalar(cfg.users()) / cfg.fronthaul_scaling()};
}

/// Fronthaul and edge run simultaneously, so the slower one dominates.
template <class Scalar>
Scalar pipelined(const NdtPair<Scalar>& pair) {
  return pair.edge > pair.fronthaul ? pair.edge : pair.fronthaul;
}

/// Per-block time sharing: alpha of each file via `first`, the rest via
/// `second`, combined component-wise. Apply `pipelined` afterwards.
template <class Scalar>
NdtPair<Scalar> time_share(const NdtPair<Scalar>& first, const NdtPair<Scalar>& second,
                           const Scalar& alpha) {
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) {
    throw std::domain_error("time-sharing fraction must lie in [0, 1]");
  }
  const Scalar rest = Scalar(1) - alpha;
  return {alpha * first.edge + rest * second.edge,
          alpha * first.fronthaul + rest * second.fronthaul};
}

}  // namespace fogndt
