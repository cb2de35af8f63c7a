#include "fogndt/certificates.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <stdexcept>
#include <thread>

namespace fogndt {

const std::vector<std::string_view> kCertificateNames = {
    "offline_bound_ordering",
    "offline_ratio_below_two",
    "offline_tightness",
    "online_low_cache_identity",
    "online_intermediate_bound",
    "online_extended_bound",
    "online_full_caching_identity",
    "online_multiplicative_gap",
    "online_lower_bounds_ordered",
    "online_refined_bound_below_achievable",
};

namespace {

enum CertificateIndex : std::size_t {
  kOfflineOrdering,
  kOfflineRatio,
  kOfflineTightness,
  kLowCacheIdentity,
  kIntermediateBound,
  kExtendedBound,
  kFullCachingIdentity,
  kMultiplicative,
  kBasicBelowRefined,
  kRefinedBelowAchievable,
  kCertificateCount,
};

std::size_t gap_index(GapRelation relation) {
  switch (relation) {
    case GapRelation::LowCacheIdentity: return kLowCacheIdentity;
    case GapRelation::IntermediateBound: return kIntermediateBound;
    case GapRelation::ExtendedBound: return kExtendedBound;
    case GapRelation::FullCachingIdentity: return kFullCachingIdentity;
  }
  throw std::logic_error("unhandled gap relation");
}

struct BlockResult {
  std::uint64_t points = 0;
  std::vector<CertificateTally> tallies;
};

class Recorder {
 public:
  explicit Recorder(std::vector<CertificateTally>& tallies) : tallies_(tallies) {}

  template <class Describe>
  void record(std::size_t index, bool ok, Describe&& describe_failure) {
    auto& t = tallies_[index];
    ++t.checked;
    if (ok) return;
    ++t.failed;
    if (t.first_violation.empty()) t.first_violation = describe_failure();
  }

  void skip(std::size_t index) { ++tallies_[index].skipped; }

 private:
  std::vector<CertificateTally>& tallies_;
};

std::vector<CertificateTally> fresh_tallies() {
  std::vector<CertificateTally> tallies(kCertificateCount);
  for (std::size_t i = 0; i < kCertificateCount; ++i) tallies[i].name = std::string(kCertificateNames[i]);
  return tallies;
}

BlockResult evaluate_block(const VerifyGrid& grid, const GridBlock& block, const std::vector<Rational>& mus) {
  BlockResult out;
  out.tallies = fresh_tallies();
  Recorder rec(out.tallies);

  RawParameters<Rational> raw;
  raw.ens = block.ens;
  raw.users = block.users;
  raw.library_size = block.users;
  raw.fronthaul_scaling = block.r;
  const auto base = validate_config(raw);
  const auto bp = breakpoints(base);

  for (const auto& mu : mus) {
    const auto cfg_mu = base.with_cache_fraction(mu);
    const auto off = evaluate_offline_gap(cfg_mu, bp);
    const auto text = [&] { return describe(cfg_mu); };
    rec.record(kOfflineOrdering, off.ordered, [&] {
      return text() + ": lower bound " + scalar_text(off.lower_bound) + " > achievable " + scalar_text(off.achievable);
    });
    rec.record(kOfflineRatio, off.ratio_below_two,
               [&] { return text() + ": ratio " + scalar_text(off.ratio) + " >= 2"; });
    if (off.tightness_required) {
      rec.record(kOfflineTightness, off.tight, [&] {
        return text() + ": achievable " + scalar_text(off.achievable) + " != lower bound " +
               scalar_text(off.lower_bound);
      });
    } else {
      rec.skip(kOfflineTightness);
    }

    for (const auto& p : grid.churn_values) {
      const auto cfg_p = cfg_mu.with_churn_probability(p);
      const auto gap = evaluate_online_offline_gap(cfg_p, bp, off.achievable);
      for (const auto& check : gap.checks) {
        rec.record(gap_index(check.relation), check.holds, [&] {
          return describe(cfg_p) + ": difference " + scalar_text(gap.difference) +
                 (check.identity ? " != " : " > ") + scalar_text(check.bound);
        });
      }
      const Rational online_ach = gap.difference + off.achievable;
      const auto mult = evaluate_multiplicative_gap(cfg_p, online_ach, off.lower_bound);
      if (mult.precondition) {
        rec.record(kMultiplicative, mult.holds, [&] {
          return describe(cfg_p) + ": online achievable " + scalar_text(mult.achievable) +
                 " >= " + scalar_text(mult.bound);
        });
      } else {
        rec.skip(kMultiplicative);
      }

      for (int factor : grid.library_factors) {
        ++out.points;
        const auto cfg = cfg_p.with_library_size(static_cast<std::int64_t>(block.users) * factor);
        const Rational basic = online_lower_bound(cfg, OnlineBoundVariant::Basic, off.lower_bound);
        const Rational refined = online_lower_bound(cfg, OnlineBoundVariant::Refined, off.lower_bound);
        rec.record(kBasicBelowRefined, basic <= refined, [&] {
          return describe(cfg) + ": basic bound " + scalar_text(basic) + " > refined " + scalar_text(refined);
        });
        rec.record(kRefinedBelowAchievable, refined <= online_ach, [&] {
          return describe(cfg) + ": refined bound " + scalar_text(refined) + " > online achievable " +
                 scalar_text(online_ach);
        });
      }
    }
  }
  return out;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(certificates.begin(), certificates.end(),
                     [](const CertificateTally& t) { return t.passed(); });
}

const CertificateTally& VerifyReport::find(std::string_view name) const {
  for (const auto& t : certificates) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("no certificate named '" + std::string(name) + "'");
}

std::vector<Rational> unit_interval_grid(const Rational& step) {
  if (!(step > 0)) throw std::invalid_argument("grid step must be positive");
  std::vector<Rational> out;
  for (Rational x = 0; x <= 1; x += step) out.push_back(x);
  return out;
}

std::vector<GridBlock> grid_blocks(const VerifyGrid& grid) {
  if (grid.max_ens < 1 || grid.max_users < 1) throw std::invalid_argument("empty grid: no (M, K) pairs");
  if (!(grid.r_step > 0)) throw std::invalid_argument("r step must be positive");
  if (!(grid.mu_step > 0) || grid.mu_step > 1) throw std::invalid_argument("mu step must lie in (0, 1]");
  if (grid.churn_values.empty()) throw std::invalid_argument("empty grid: no churn probabilities");
  if (grid.library_factors.empty()) throw std::invalid_argument("empty grid: no library factors");
  for (const auto& p : grid.churn_values) {
    if (p < 0 || p > 1) throw std::invalid_argument("churn probability outside [0, 1]: " + format_rational(p));
  }
  for (int f : grid.library_factors) {
    if (f < 1) throw std::invalid_argument("library factor must be at least 1");
  }

  std::vector<GridBlock> blocks;
  for (int M = 1; M <= grid.max_ens; ++M) {
    for (int K = 1; K <= grid.max_users; ++K) {
      const Rational r_max = grid.r_max ? *grid.r_max : Rational(std::min(M, K)) - Rational(1, 20);
      for (Rational r = grid.r_step; r <= r_max; r += grid.r_step) blocks.push_back({M, K, r});
    }
  }
  if (blocks.empty()) throw std::invalid_argument("empty grid: no r values");
  return blocks;
}

VerifyReport run_verification(const VerifyGrid& grid, unsigned threads) {
  const auto blocks = grid_blocks(grid);
  const auto mus = unit_interval_grid(grid.mu_step);

  std::vector<BlockResult> results(blocks.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, blocks.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < blocks.size(); i = next++) {
        results[i] = evaluate_block(grid, blocks[i], mus);
      }
    }));
  }
  for (auto& job : jobs) job.get();

  VerifyReport report;
  report.certificates = fresh_tallies();
  for (const auto& block : results) {
    report.points += block.points;
    for (std::size_t i = 0; i < kCertificateCount; ++i) {
      auto& total = report.certificates[i];
      const auto& part = block.tallies[i];
      total.checked += part.checked;
      total.failed += part.failed;
      total.skipped += part.skipped;
      if (total.first_violation.empty()) total.first_violation = part.first_violation;
    }
  }
  return report;
}

}  // namespace fogndt
