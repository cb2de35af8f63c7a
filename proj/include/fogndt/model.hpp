#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fogndt/rational.hpp"

namespace fogndt {

enum class ValidationErrorKind {
  ZeroEdgeNodes,
  ZeroUsers,
  LibraryTooSmall,
  CacheFractionOutOfRange,
  FronthaulScalingNotPositive,
  ChurnProbabilityOutOfRange,
  DimensionTooLarge,
};

std::string_view to_string(ValidationErrorKind kind);

class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ValidationErrorKind kind, const std::string& detail);
  ValidationErrorKind kind() const noexcept { return kind_; }

 private:
  ValidationErrorKind kind_;
};

/// A proven relation failed to hold at a concrete configuration.
class CertificateViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unchecked parameter tuple as read from flags or a config file.
template <class Scalar>
struct RawParameters {
  std::int64_t ens = 0;
  std::int64_t users = 0;
  std::int64_t library_size = 0;
  Scalar cache_fraction{0};
  Scalar fronthaul_scaling{0};
  Scalar churn_probability{0};
};

template <class Scalar>
class BasicNetworkConfig;

template <class Scalar>
BasicNetworkConfig<Scalar> validate_config(const RawParameters<Scalar>& raw);

/// One F-RAN instance: M edge nodes, K users, N popular files, cache
/// fraction mu, fronthaul power scaling r and churn probability p.
/// Only obtainable through validate_config, so every instance satisfies
/// M, K >= 1, N >= K, 0 <= mu <= 1, r > 0 and 0 <= p <= 1.
template <class Scalar>
class BasicNetworkConfig {
 public:
  using scalar_type = Scalar;

  int ens() const { return ens_; }
  int users() const { return users_; }
  int library_size() const { return library_size_; }
  const Scalar& cache_fraction() const { return mu_; }
  const Scalar& fronthaul_scaling() const { return r_; }
  const Scalar& churn_probability() const { return p_; }

  /// min(M, K): the number of users that can be served interference-free.
  int spatial_dof() const { return ens_ < users_ ? ens_ : users_; }

  RawParameters<Scalar> raw() const {
    return {ens_, users_, library_size_, mu_, r_, p_};
  }

  BasicNetworkConfig with_cache_fraction(const Scalar& mu) const {
    auto r = raw();
    r.cache_fraction = mu;
    return validate_config(r);
  }
  BasicNetworkConfig with_fronthaul_scaling(const Scalar& rr) const {
    auto r = raw();
    r.fronthaul_scaling = rr;
    return validate_config(r);
  }
  BasicNetworkConfig with_churn_probability(const Scalar& p) const {
    auto r = raw();
    r.churn_probability = p;
    return validate_config(r);
  }
  BasicNetworkConfig with_library_size(std::int64_t n) const {
    auto r = raw();
    r.library_size = n;
    return validate_config(r);
  }

  BasicNetworkConfig<double> as_double() const;

  friend bool operator==(const BasicNetworkConfig& a, const BasicNetworkConfig& b) {
    return a.ens_ == b.ens_ && a.users_ == b.users_ && a.library_size_ == b.library_size_ &&
           a.mu_ == b.mu_ && a.r_ == b.r_ && a.p_ == b.p_;
  }

 private:
  template <class S>
  friend BasicNetworkConfig<S> validate_config(const RawParameters<S>& raw);
  template <class S>
  friend class BasicNetworkConfig;

  BasicNetworkConfig() = default;

  int ens_ = 1;
  int users_ = 1;
  int library_size_ = 1;
  Scalar mu_{0};
  Scalar r_{1};
  Scalar p_{0};
};

using NetworkConfig = BasicNetworkConfig<double>;
using ExactNetworkConfig = BasicNetworkConfig<Rational>;

template <class Scalar>
BasicNetworkConfig<Scalar> validate_config(const RawParameters<Scalar>& raw) {
  using K = ValidationErrorKind;
  if (raw.ens < 1) throw ValidationError(K::ZeroEdgeNodes, "need at least one edge node");
  if (raw.users < 1) throw ValidationError(K::ZeroUsers, "need at least one user");
  if (raw.library_size < raw.users) {
    throw ValidationError(K::LibraryTooSmall, "library smaller than demand");
  }
  if (raw.ens > 1'000'000 || raw.users > 1'000'000 || raw.library_size > 1'000'000'000) {
    throw ValidationError(K::DimensionTooLarge, "network dimensions out of supported range");
  }
  // Comparisons are written so that NaN fails every check.
  if (!(raw.cache_fraction >= Scalar(0) && raw.cache_fraction <= Scalar(1))) {
    throw ValidationError(K::CacheFractionOutOfRange, "cache fraction must lie in [0, 1]");
  }
  if (!(raw.fronthaul_scaling > Scalar(0))) {
    throw ValidationError(K::FronthaulScalingNotPositive, "fronthaul scaling must be positive");
  }
  if constexpr (!is_exact_v<Scalar>) {
    if (!std::isfinite(raw.fronthaul_scaling)) {
      throw ValidationError(K::FronthaulScalingNotPositive, "fronthaul scaling must be finite");
    }
  }
  if (!(raw.churn_probability >= Scalar(0) && raw.churn_probability <= Scalar(1))) {
    throw ValidationError(K::ChurnProbabilityOutOfRange, "churn probability must lie in [0, 1]");
  }

  BasicNetworkConfig<Scalar> cfg;
  cfg.ens_ = static_cast<int>(raw.ens);
  cfg.users_ = static_cast<int>(raw.users);
  cfg.library_size_ = static_cast<int>(raw.library_size);
  cfg.mu_ = raw.cache_fraction;
  cfg.r_ = raw.fronthaul_scaling;
  cfg.p_ = raw.churn_probability;
  return cfg;
}

template <class Scalar>
BasicNetworkConfig<double> BasicNetworkConfig<Scalar>::as_double() const {
  BasicNetworkConfig<double> out;
  out.ens_ = ens_;
  out.users_ = users_;
  out.library_size_ = library_size_;
  out.mu_ = to_double(mu_);
  out.r_ = to_double(r_);
  out.p_ = to_double(p_);
  return out;
}

template <class Scalar>
std::string scalar_text(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) {
    return format_rational(x);
  } else {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
  }
}

template <class Scalar>
std::string describe(const BasicNetworkConfig<Scalar>& cfg) {
  return "M=" + std::to_string(cfg.ens()) + " K=" + std::to_string(cfg.users()) +
         " N=" + std::to_string(cfg.library_size()) + " mu=" + scalar_text(cfg.cache_fraction()) +
         " r=" + scalar_text(cfg.fronthaul_scaling()) + " p=" + scalar_text(cfg.churn_probability());
}

/// (edge NDT, fronthaul NDT) of a delivery scheme. Kept separate until the
/// final pipelined max.
template <class Scalar>
struct NdtPair {
  Scalar edge{0};
  Scalar fronthaul{0};

  friend bool operator==(const NdtPair&, const NdtPair&) = default;
};

/// Cache-fraction thresholds. mu2_prime_raw is +infinity when K = 1 and may
/// exceed 1; mu2_prime_clamped = min(raw, 1).
template <class Scalar>
struct RegimeBreakpoints {
  Scalar mu1{0};
  Scalar mu2{0};
  ExtendedReal<Scalar> mu2_prime_raw;
  Scalar mu2_prime_clamped{0};
};

enum class Regime { LowCache, Intermediate, FullCaching };
enum class Scheme { Offline, Online };

std::string_view to_string(Regime regime);
std::string_view to_string(Scheme scheme);

/// Upper breakpoint of the intermediate regime: mu2 offline, raw mu'2 online.
template <class Scalar>
ExtendedReal<Scalar> upper_breakpoint(const RegimeBreakpoints<Scalar>& bp, Scheme scheme) {
  return scheme == Scheme::Offline ? ExtendedReal<Scalar>(bp.mu2) : bp.mu2_prime_raw;
}

/// The regime whose formula governs mu. Full caching wins ties, so that
/// when every breakpoint collapses to 0 the plateau covers [0, 1].
template <class Scalar>
Regime classify(const Scalar& mu, const RegimeBreakpoints<Scalar>& bp, Scheme scheme) {
  if (mu >= upper_breakpoint(bp, scheme)) return Regime::FullCaching;
  if (mu <= bp.mu1) return Regime::LowCache;
  return Regime::Intermediate;
}

/// Every regime whose (nonempty) closed interval contains mu. Two entries
/// at a shared boundary, one otherwise.
template <class Scalar>
std::vector<Regime> containing_regimes(const Scalar& mu, const RegimeBreakpoints<Scalar>& bp,
                                       Scheme scheme) {
  const auto upper = upper_breakpoint(bp, scheme);
  std::vector<Regime> out;
  const bool low_nonempty = bp.mu1 > Scalar(0);
  const bool mid_nonempty = upper.is_infinite() || upper.value() > bp.mu1;
  const bool full_nonempty = Scalar(1) >= upper;
  if (low_nonempty && mu <= bp.mu1) out.push_back(Regime::LowCache);
  if (mid_nonempty && mu >= bp.mu1 && mu <= upper) out.push_back(Regime::Intermediate);
  if (full_nonempty && mu >= upper) out.push_back(Regime::FullCaching);
  return out;
}

/// Key-value config text: one `key = value` per line, '#' comments.
/// Keys: ens, users, library_size, cache_fraction, fronthaul_scaling,
/// churn_probability. Throws std::invalid_argument on malformed input.
std::map<std::string, std::string> parse_key_values(std::string_view text);

RawParameters<Rational> raw_from_key_values(const std::map<std::string, std::string>& fields);

ExactNetworkConfig parse_config_text(std::string_view text);
std::string to_config_text(const ExactNetworkConfig& cfg);

extern const std::vector<std::string_view> kConfigKeys;

}  // namespace fogndt
