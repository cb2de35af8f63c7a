#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fogndt/online.hpp"

namespace fogndt {

template <class Scalar>
struct OfflineGapEntry {
  BasicNetworkConfig<Scalar> config;
  OfflineGapPoint<Scalar> point;
};

template <class Scalar>
struct OfflineGapReport {
  std::vector<OfflineGapEntry<Scalar>> entries;
  Scalar max_ratio{0};
};

/// Achievable vs. lower bound over a grid. Throws CertificateViolation at the
/// first configuration where the ratio reaches 2, the bound exceeds the
/// achievable value, or the two differ on [0, mu1] or [mu2, 1].
template <class Scalar>
OfflineGapReport<Scalar> offline_gap_certificate(std::span<const BasicNetworkConfig<Scalar>> grid) {
  OfflineGapReport<Scalar> report;
  for (const auto& cfg : grid) {
    auto pt = evaluate_offline_gap(cfg);
    if (!pt.holds()) {
      std::string what = !pt.ordered             ? "lower bound exceeds achievable"
                         : !pt.ratio_below_two   ? "ratio not below 2"
                                                 : "achievable differs from lower bound";
      throw CertificateViolation("offline gap certificate: " + what + " at " + describe(cfg) +
                                 " (achievable " + scalar_text(pt.achievable) + ", lower bound " +
                                 scalar_text(pt.lower_bound) + ")");
    }
    if (pt.ratio > report.max_ratio) report.max_ratio = pt.ratio;
    report.entries.push_back({cfg, std::move(pt)});
  }
  return report;
}

template <class Scalar>
struct MultiplicativeGapReport {
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
  /// Smallest bound - achievable over checked points.
  std::optional<Scalar> min_slack;
};

/// online_achievable < 2 offline_lower_bound + 6 + 4p/r over a grid; points
/// with r >= min(M, K) are counted as skipped. Throws CertificateViolation.
template <class Scalar>
MultiplicativeGapReport<Scalar> multiplicative_gap_certificate(
    std::span<const BasicNetworkConfig<Scalar>> grid) {
  MultiplicativeGapReport<Scalar> report;
  for (const auto& cfg : grid) {
    const auto pt = evaluate_multiplicative_gap(cfg);
    if (!pt.precondition) {
      ++report.skipped;
      continue;
    }
    if (!pt.holds) {
      throw CertificateViolation("multiplicative gap certificate violated at " + describe(cfg) +
                                 ": online achievable " + scalar_text(pt.achievable) + " >= " +
                                 scalar_text(pt.bound));
    }
    ++report.checked;
    const Scalar slack = pt.bound - pt.achievable;
    if (!report.min_slack || slack < *report.min_slack) report.min_slack = slack;
  }
  return report;
}

/// Orderings that any pair of valid bounds and achievable schemes must obey.
template <class Scalar>
struct BoundOrderingPoint {
  Scalar offline_achievable{0};
  Scalar offline_lower_bound{0};
  Scalar online_achievable{0};
  Scalar online_lower_bound_basic{0};
  Scalar online_lower_bound_refined{0};

  bool offline_ordered() const { return offline_lower_bound <= offline_achievable; }
  bool basic_below_refined() const { return online_lower_bound_basic <= online_lower_bound_refined; }
  bool refined_below_achievable() const { return online_lower_bound_refined <= online_achievable; }
};

template <class Scalar>
BoundOrderingPoint<Scalar> evaluate_bound_ordering(const BasicNetworkConfig<Scalar>& cfg) {
  const auto bp = breakpoints(cfg);
  BoundOrderingPoint<Scalar> pt;
  pt.offline_achievable = offline_achievable(cfg, bp);
  pt.offline_lower_bound = offline_lower_bound(cfg);
  pt.online_achievable = online_achievable(cfg, bp);
  pt.online_lower_bound_basic = online_lower_bound(cfg, OnlineBoundVariant::Basic, pt.offline_lower_bound);
  pt.online_lower_bound_refined =
      online_lower_bound(cfg, OnlineBoundVariant::Refined, pt.offline_lower_bound);
  return pt;
}

/// Exhaustive verification grid. For each M <= max_ens, K <= max_users:
/// r = r_step, 2 r_step, ... up to r_max (default min(M,K) - 1/20),
/// mu = 0, mu_step, ... up to 1, p from churn_values, N = K * factor.
struct VerifyGrid {
  int max_ens = 4;
  int max_users = 4;
  Rational mu_step{1, 100};
  Rational r_step{1, 10};
  std::optional<Rational> r_max;
  std::vector<Rational> churn_values{Rational(0), Rational(1, 2), Rational(9, 10), Rational(1)};
  std::vector<int> library_factors{1, 2};
};

/// Pass/fail tally of one certificate across the grid.
struct CertificateTally {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  std::uint64_t skipped = 0;
  /// First failing point in grid order, empty when none failed.
  std::string first_violation;

  bool passed() const { return failed == 0; }
};

struct VerifyReport {
  std::uint64_t points = 0;
  std::vector<CertificateTally> certificates;

  bool all_passed() const;
  const CertificateTally& find(std::string_view name) const;
};

/// Certificate names in report order.
extern const std::vector<std::string_view> kCertificateNames;

/// Throws std::invalid_argument when the grid is empty or malformed.
VerifyReport run_verification(const VerifyGrid& grid, unsigned threads = 0);

/// The (M, K, r) blocks of a grid, in evaluation order. Each block sweeps mu
/// over mu_step multiples in [0, 1].
struct GridBlock {
  int ens = 1;
  int users = 1;
  Rational r;
};
std::vector<GridBlock> grid_blocks(const VerifyGrid& grid);
std::vector<Rational> unit_interval_grid(const Rational& step);

}  // namespace fogndt
