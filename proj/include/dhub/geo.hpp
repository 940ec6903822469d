#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace dhub::geo {

inline constexpr std::string_view kUnknownRegion = "OTHER";

/// UN M49 sub-region for an ISO 3166-1 alpha-2 code. Codes absent from the
/// embedded table (and AQ, which has no sub-region) map to "OTHER".
/// Throws ErrorCode::Input unless `code` is exactly two uppercase ASCII letters.
std::string region_of(std::string_view code);

/// True for the 249 officially assigned alpha-2 codes.
bool is_known_country(std::string_view code);

bool is_alpha2_shape(std::string_view code);

/// The fixed 45-country pool used by the synthetic generator, in pool order.
std::span<const std::string_view> country_pool();

}  // namespace dhub::geo
