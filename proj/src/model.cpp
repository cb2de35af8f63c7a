#include "fogndt/model.hpp"

#include <sstream>

namespace fogndt {

const std::vector<std::string_view> kConfigKeys = {
    "ens", "users", "library_size", "cache_fraction", "fronthaul_scaling", "churn_probability",
};

std::string_view to_string(ValidationErrorKind kind) {
  switch (kind) {
    case ValidationErrorKind::ZeroEdgeNodes: return "zero_edge_nodes";
    case ValidationErrorKind::ZeroUsers: return "zero_users";
    case ValidationErrorKind::LibraryTooSmall: return "library_too_small";
    case ValidationErrorKind::CacheFractionOutOfRange: return "cache_fraction_out_of_range";
    case ValidationErrorKind::FronthaulScalingNotPositive: return "fronthaul_scaling_not_positive";
    case ValidationErrorKind::ChurnProbabilityOutOfRange: return "churn_probability_out_of_range";
    case ValidationErrorKind::DimensionTooLarge: return "dimension_too_large";
  }
  return "unknown";
}

ValidationError::ValidationError(ValidationErrorKind kind, const std::string& detail)
    : std::invalid_argument(detail), kind_(kind) {}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::LowCache: return "low_cache";
    case Regime::Intermediate: return "intermediate";
    case Regime::FullCaching: return "full_caching";
  }
  return "unknown";
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::Offline ? "offline" : "online";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_known_key(std::string_view key) {
  for (auto k : kConfigKeys) {
    if (k == key) return true;
  }
  return false;
}

std::int64_t parse_count(const std::string& key, const std::string& text) {
  const Rational value = parse_rational(text);
  if (boost::multiprecision::denominator(value) != 1) {
    throw std::invalid_argument("'" + key + "' must be an integer, got '" + text + "'");
  }
  const auto num = boost::multiprecision::numerator(value);
  if (num < -1'000'000'000'000LL || num > 1'000'000'000'000LL) {
    throw std::invalid_argument("'" + key + "' is out of range");
  }
  return num.convert_to<std::int64_t>();
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> fields;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!is_known_key(key)) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    }
    if (!fields.emplace(key, value).second) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return fields;
}

RawParameters<Rational> raw_from_key_values(const std::map<std::string, std::string>& fields) {
  for (auto key : kConfigKeys) {
    if (!fields.count(std::string(key))) {
      throw std::invalid_argument("missing config field '" + std::string(key) + "'");
    }
  }
  RawParameters<Rational> raw;
  raw.ens = parse_count("ens", fields.at("ens"));
  raw.users = parse_count("users", fields.at("users"));
  raw.library_size = parse_count("library_size", fields.at("library_size"));
  raw.cache_fraction = parse_rational(fields.at("cache_fraction"));
  raw.fronthaul_scaling = parse_rational(fields.at("fronthaul_scaling"));
  raw.churn_probability = parse_rational(fields.at("churn_probability"));
  return raw;
}

ExactNetworkConfig parse_config_text(std::string_view text) {
  return validate_config(raw_from_key_values(parse_key_values(text)));
}

std::string to_config_text(const ExactNetworkConfig& cfg) {
  std::ostringstream out;
  out << "ens = " << cfg.ens() << '\n'
      << "users = " << cfg.users() << '\n'
      << "library_size = " << cfg.library_size() << '\n'
      << "cache_fraction = " << format_rational(cfg.cache_fraction()) << '\n'
      << "fronthaul_scaling = " << format_rational(cfg.fronthaul_scaling()) << '\n'
      << "churn_probability = " << format_rational(cfg.churn_probability()) << '\n';
  return out.str();
}

}  // namespace fogndt
