#pragma once

#include <string_view>

#include "fogndt/model.hpp"

namespace fogndt::test {

inline Rational Q(std::string_view text) { return parse_rational(text); }

inline ExactNetworkConfig exact(std::int64_t M, std::int64_t K, std::int64_t N, std::string_view mu,
                                std::string_view r, std::string_view p = "0") {
  RawParameters<Rational> raw;
  raw.ens = M;
  raw.users = K;
  raw.library_size = N;
  raw.cache_fraction = Q(mu);
  raw.fronthaul_scaling = Q(r);
  raw.churn_probability = Q(p);
  return validate_config(raw);
}

inline ExactNetworkConfig exact(std::int64_t M, std::int64_t K, std::int64_t N, const Rational& mu,
                                const Rational& r, const Rational& p) {
  RawParameters<Rational> raw{M, K, N, mu, r, p};
  return validate_config(raw);
}

}  // namespace fogndt::test
