#include "fogndt/online.hpp"

namespace fogndt {

std::string_view to_string(OnlineBoundVariant variant) {
  return variant == OnlineBoundVariant::Basic ? "basic" : "refined";
}

std::string_view to_string(GapRelation relation) {
  switch (relation) {
    case GapRelation::LowCacheIdentity: return "low_cache_identity";
    case GapRelation::IntermediateBound: return "intermediate_bound";
    case GapRelation::ExtendedBound: return "extended_bound";
    case GapRelation::FullCachingIdentity: return "full_caching_identity";
  }
  return "unknown";
}

}  // namespace fogndt
