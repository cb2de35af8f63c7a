#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fogndt/online.hpp"
#include "fogndt/popsim.hpp"

namespace fogndt {

/// Formula: per-slot values chosen so the time average is the closed form by
/// construction. Operational: explicit fronthaul/edge accounting of the
/// proactive scheme in every slot.
enum class SimulationMode { Formula, Operational };

std::string_view to_string(SimulationMode mode);
std::optional<SimulationMode> parse_simulation_mode(std::string_view text);

/// Fronthaul/edge pair of a slot without arrival in operational mode.
///   low cache:    coordination/C-RAN mix, alpha = mu M
///   full caching: cooperation/C-RAN mix, alpha = mu
///   intermediate: the mu1 operating point blended towards the
///                 cooperation/C-RAN mix at alpha = min(mu2', 1), with weight
///                 (mu - mu1)/(mu2' - mu1) (0 when mu2' = +inf)
template <class Scalar>
NdtPair<Scalar> operational_slot_pair(const BasicNetworkConfig<Scalar>& cfg,
                                      const RegimeBreakpoints<Scalar>& bp) {
  const Scalar& mu = cfg.cache_fraction();
  const Scalar M(cfg.ens());
  const auto cran = cran_ndt(cfg);
  switch (classify(mu, bp, Scheme::Online)) {
    case Regime::LowCache:
      return time_share(en_coordination_ndt(cfg), cran, Scalar(mu * M));
    case Regime::FullCaching:
      return time_share(en_cooperation_ndt(cfg), cran, mu);
    case Regime::Intermediate: {
      const auto low = time_share(en_coordination_ndt(cfg), cran, Scalar(bp.mu1 * M));
      const auto high = time_share(en_cooperation_ndt(cfg), cran, bp.mu2_prime_clamped);
      const Scalar weight = bp.mu2_prime_raw.is_infinite()
                                ? Scalar(0)
                                : Scalar((mu - bp.mu1) / (bp.mu2_prime_raw.value() - bp.mu1));
      return time_share(high, low, weight);
    }
  }
  throw std::logic_error("unhandled regime");
}

/// NDT of one slot. On arrival slots the proactive push of a mu-fraction of
/// the new file adds mu/r to the fronthaul before the pipelined max.
/// Formula mode returns B without arrival and B + (A - B)/p with arrival,
/// where A is the online closed form and B its p = 0 value; it throws
/// std::domain_error for an arrival with p = 0.
template <class Scalar>
Scalar slot_ndt(const BasicNetworkConfig<Scalar>& cfg, bool arrival, SimulationMode mode) {
  const auto bp = breakpoints(cfg);
  if (mode == SimulationMode::Formula) {
    const Scalar base = online_achievable(cfg.with_churn_probability(Scalar(0)), bp);
    if (!arrival) return base;
    const Scalar& p = cfg.churn_probability();
    if (!(p > Scalar(0))) {
      throw std::domain_error("formula-mode arrival slot is undefined for p = 0");
    }
    return base + (online_achievable(cfg, bp) - base) / p;
  }
  auto pair = operational_slot_pair(cfg, bp);
  if (arrival) pair.fronthaul += cfg.cache_fraction() / cfg.fronthaul_scaling();
  return pipelined(pair);
}

struct SlotOutcome {
  std::uint64_t slot = 0;
  bool arrival = false;
  std::optional<std::size_t> replaced_index;
  RequestVector requests;
  bool fresh_requested = false;
  double slot_ndt = 0.0;
};

using SlotObserver = std::function<void(const SlotOutcome&)>;

/// Streaming mean/variance with pairwise merging, so trials can be
/// aggregated in any grouping.
class RunningStats {
 public:
  void push(double x);
  void merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Sample variance (n - 1 denominator); 0 for fewer than two samples.
  double variance() const;
  double standard_error() const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SimulationResult {
  std::uint64_t slots = 0;
  double mean_ndt = 0.0;
  double standard_error = 0.0;
  double empirical_arrival_rate = 0.0;
  double empirical_fresh_request_rate = 0.0;
  SimulationMode mode = SimulationMode::Formula;
  std::uint64_t seed = 0;
  /// Online regime of the simulated cache fraction.
  Regime regime = Regime::LowCache;
};

namespace detail {

struct SlotModel {
  std::size_t library_size = 1;
  std::size_t users = 1;
  double churn_probability = 0.0;
  double no_arrival_ndt = 0.0;
  double arrival_ndt = 0.0;
};

struct TrajectoryTally {
  RunningStats ndt;
  std::uint64_t arrivals = 0;
  std::uint64_t fresh_requests = 0;
};

TrajectoryTally simulate_trajectory(const SlotModel& model, std::uint64_t slots, RandomStream rng,
                                    const SlotObserver& observer);

TrajectoryTally simulate_trials(const SlotModel& model, std::uint64_t slots_per_trial, std::uint64_t seed,
                                std::uint64_t trials, unsigned threads);

SimulationResult to_result(const TrajectoryTally& tally, SimulationMode mode, std::uint64_t seed,
                           Regime regime);

template <class Scalar>
SlotModel make_slot_model(const BasicNetworkConfig<Scalar>& cfg, SimulationMode mode) {
  SlotModel model;
  model.library_size = static_cast<std::size_t>(cfg.library_size());
  model.users = static_cast<std::size_t>(cfg.users());
  model.churn_probability = to_double(cfg.churn_probability());
  model.no_arrival_ndt = to_double(slot_ndt(cfg, false, mode));
  model.arrival_ndt = cfg.churn_probability() > Scalar(0) ? to_double(slot_ndt(cfg, true, mode))
                                                          : model.no_arrival_ndt;
  return model;
}

}  // namespace detail

/// Simulates `slots` slots of the churn process and averages the per-slot
/// NDT. Slot values are evaluated once in Scalar arithmetic, so with an
/// exact config a p = 0 run reproduces the closed form bit for bit.
/// Deterministic in (cfg, slots, seed, mode).
template <class Scalar>
SimulationResult run_simulation(const BasicNetworkConfig<Scalar>& cfg, std::uint64_t slots,
                                std::uint64_t seed, SimulationMode mode,
                                const SlotObserver& observer = {}) {
  if (slots == 0) throw std::invalid_argument("simulation needs at least one slot");
  const auto model = detail::make_slot_model(cfg, mode);
  const auto tally = detail::simulate_trajectory(model, slots, derive_stream(seed, 0), observer);
  return detail::to_result(tally, mode, seed,
                           classify(cfg.cache_fraction(), breakpoints(cfg), Scheme::Online));
}

/// Independent trials on derived streams, run on up to `threads` threads and
/// merged in trial order. One trial reproduces run_simulation.
template <class Scalar>
SimulationResult run_trials(const BasicNetworkConfig<Scalar>& cfg, std::uint64_t slots_per_trial,
                            std::uint64_t seed, SimulationMode mode, std::uint64_t trials,
                            unsigned threads = 0) {
  if (slots_per_trial == 0 || trials == 0) throw std::invalid_argument("need at least one slot and trial");
  const auto model = detail::make_slot_model(cfg, mode);
  const auto tally = detail::simulate_trials(model, slots_per_trial, seed, trials, threads);
  return detail::to_result(tally, mode, seed,
                           classify(cfg.cache_fraction(), breakpoints(cfg), Scheme::Online));
}

struct ConvergencePoint {
  std::uint64_t slots = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double abs_error = 0.0;
  /// standard_error * sqrt(slots): the per-slot spread, constant under CLT.
  double per_slot_deviation = 0.0;
  bool within_three_standard_errors = false;
};

struct ConvergenceReport {
  double closed_form = 0.0;
  std::vector<ConvergencePoint> points;
  /// Every per_slot_deviation within a factor 3 of the first one.
  bool deviation_stable = false;

  bool consistent() const;
};

/// Errors against the closed form for runs at increasing slot counts.
/// Requires at least two results of one mode with strictly increasing slots.
ConvergenceReport convergence_report(std::span<const SimulationResult> results, double closed_form);

/// Observer writing slot,arrival,replaced_index,requests,slot_ndt rows.
/// The header is written immediately.
SlotObserver csv_trace_writer(std::ostream& out);

}  // namespace fogndt
