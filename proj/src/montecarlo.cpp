#include "fogndt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <thread>

#include <fmt/format.h>

namespace fogndt {

std::string_view to_string(SimulationMode mode) {
  return mode == SimulationMode::Formula ? "formula" : "operational";
}

std::optional<SimulationMode> parse_simulation_mode(std::string_view text) {
  if (text == "formula") return SimulationMode::Formula;
  if (text == "operational") return SimulationMode::Operational;
  return std::nullopt;
}

void RunningStats::push(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double n = n_a + n_b;
  const double delta = other.mean_ - mean_;
  // Equal means (including the constant-sequence case) leave mean_ untouched.
  if (delta != 0.0) mean_ += delta * n_b / n;
  m2_ += other.m2_ + delta * delta * n_a * n_b / n;
  count_ += other.count_;
}

double RunningStats::variance() const {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningStats::standard_error() const {
  return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

namespace detail {

TrajectoryTally simulate_trajectory(const SlotModel& model, std::uint64_t slots, RandomStream rng,
                                    const SlotObserver& observer) {
  TrajectoryTally tally;
  PopularSet set = init_popular_set(model.library_size);
  for (std::uint64_t t = 0; t < slots; ++t) {
    set = advance(set, model.churn_probability, rng);
    RequestVector requests = sample_requests(set, model.users, rng);
    const bool fresh = fresh_file_requested(set, requests);
    const double value = set.arrival ? model.arrival_ndt : model.no_arrival_ndt;

    tally.ndt.push(value);
    tally.arrivals += set.arrival ? 1 : 0;
    tally.fresh_requests += fresh ? 1 : 0;

    if (observer) {
      observer(SlotOutcome{set.slot, set.arrival, set.replaced_index, std::move(requests), fresh, value});
    }
  }
  return tally;
}

TrajectoryTally simulate_trials(const SlotModel& model, std::uint64_t slots_per_trial, std::uint64_t seed,
                                std::uint64_t trials, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::min<std::uint64_t>(threads, trials);

  // Worker w handles trials w, w + workers, ...; results are merged by trial
  // index so the aggregate does not depend on scheduling.
  std::vector<TrajectoryTally> per_trial(trials);
  std::vector<std::future<void>> jobs;
  for (std::uint64_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::uint64_t trial = w; trial < trials; trial += workers) {
        per_trial[trial] = simulate_trajectory(model, slots_per_trial, derive_stream(seed, trial), {});
      }
    }));
  }
  for (auto& job : jobs) job.get();

  TrajectoryTally total;
  for (const auto& t : per_trial) {
    total.ndt.merge(t.ndt);
    total.arrivals += t.arrivals;
    total.fresh_requests += t.fresh_requests;
  }
  return total;
}

SimulationResult to_result(const TrajectoryTally& tally, SimulationMode mode, std::uint64_t seed,
                           Regime regime) {
  SimulationResult result;
  result.slots = tally.ndt.count();
  result.mean_ndt = tally.ndt.mean();
  result.standard_error = tally.ndt.standard_error();
  const double n = static_cast<double>(result.slots);
  result.empirical_arrival_rate = static_cast<double>(tally.arrivals) / n;
  result.empirical_fresh_request_rate = static_cast<double>(tally.fresh_requests) / n;
  result.mode = mode;
  result.seed = seed;
  result.regime = regime;
  return result;
}

}  // namespace detail

bool ConvergenceReport::consistent() const {
  if (!deviation_stable) return false;
  return std::all_of(points.begin(), points.end(),
                     [](const ConvergencePoint& p) { return p.within_three_standard_errors; });
}

ConvergenceReport convergence_report(std::span<const SimulationResult> results, double closed_form) {
  if (results.size() < 2) throw std::invalid_argument("convergence report needs at least two runs");
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].mode != results[0].mode) {
      throw std::invalid_argument("convergence report mixes simulation modes");
    }
    if (results[i].slots <= results[i - 1].slots) {
      throw std::invalid_argument("convergence report needs strictly increasing slot counts");
    }
  }

  ConvergenceReport report;
  report.closed_form = closed_form;
  for (const auto& r : results) {
    ConvergencePoint p;
    p.slots = r.slots;
    p.mean = r.mean_ndt;
    p.standard_error = r.standard_error;
    p.abs_error = std::abs(r.mean_ndt - closed_form);
    p.per_slot_deviation = r.standard_error * std::sqrt(static_cast<double>(r.slots));
    // A zero-variance run must hit the closed form up to rounding.
    const double tolerance = std::max(3.0 * p.standard_error, 1e-12 * std::max(1.0, std::abs(closed_form)));
    p.within_three_standard_errors = p.abs_error <= tolerance;
    report.points.push_back(p);
  }

  const double reference = report.points.front().per_slot_deviation;
  report.deviation_stable = std::all_of(report.points.begin(), report.points.end(), [&](const ConvergencePoint& p) {
    if (reference == 0.0) return p.per_slot_deviation == 0.0;
    const double ratio = p.per_slot_deviation / reference;
    return ratio >= 1.0 / 3.0 && ratio <= 3.0;
  });
  return report;
}

SlotObserver csv_trace_writer(std::ostream& out) {
  out << "slot,arrival,replaced_index,requests,slot_ndt\n";
  return [&out](const SlotOutcome& o) {
    out << o.slot << ',' << (o.arrival ? 1 : 0) << ',';
    if (o.replaced_index) out << *o.replaced_index;
    out << ',';
    for (std::size_t i = 0; i < o.requests.indices.size(); ++i) {
      if (i) out << ';';
      out << o.requests.indices[i];
    }
    out << ',' << fmt::format("{:.17g}", o.slot_ndt) << '\n';
  };
}

}  // namespace fogndt
