#include "dhub/geo.hpp"

#include "dhub/error.hpp"

#include <algorithm>
#include <utility>

namespace dhub::geo {
namespace {

constexpr std::string_view kNAF = "Northern Africa";
constexpr std::string_view kSSA = "Sub-Saharan Africa";
constexpr std::string_view kLAC = "Latin America and the Caribbean";
constexpr std::string_view kNAM = "Northern America";
constexpr std::string_view kCAS = "Central Asia";
constexpr std::string_view kEAS = "Eastern Asia";
constexpr std::string_view kSEA = "South-eastern Asia";
constexpr std::string_view kSAS = "Southern Asia";
constexpr std::string_view kWAS = "Western Asia";
constexpr std::string_view kEEU = "Eastern Europe";
constexpr std::string_view kNEU = "Northern Europe";
constexpr std::string_view kSEU = "Southern Europe";
constexpr std::string_view kWEU = "Western Europe";
constexpr std::string_view kANZ = "Australia and New Zealand";
constexpr std::string_view kMEL = "Melanesia";
constexpr std::string_view kMIC = "Micronesia";
constexpr std::string_view kPOL = "Polynesia";
constexpr std::string_view kNone = kUnknownRegion;

using Entry = std::pair<std::string_view, std::string_view>;

// Sorted by code.
constexpr std::array<Entry, 249> kCountries{{
    {"AD", kSEU}, {"AE", kWAS}, {"AF", kSAS}, {"AG", kLAC}, {"AI", kLAC}, {"AL", kSEU},
    {"AM", kWAS}, {"AO", kSSA}, {"AQ", kNone}, {"AR", kLAC}, {"AS", kPOL}, {"AT", kWEU},
    {"AU", kANZ}, {"AW", kLAC}, {"AX", kNEU}, {"AZ", kWAS}, {"BA", kSEU}, {"BB", kLAC},
    {"BD", kSAS}, {"BE", kWEU}, {"BF", kSSA}, {"BG", kEEU}, {"BH", kWAS}, {"BI", kSSA},
    {"BJ", kSSA}, {"BL", kLAC}, {"BM", kNAM}, {"BN", kSEA}, {"BO", kLAC}, {"BQ", kLAC},
    {"BR", kLAC}, {"BS", kLAC}, {"BT", kSAS}, {"BV", kLAC}, {"BW", kSSA}, {"BY", kEEU},
    {"BZ", kLAC}, {"CA", kNAM}, {"CC", kANZ}, {"CD", kSSA}, {"CF", kSSA}, {"CG", kSSA},
    {"CH", kWEU}, {"CI", kSSA}, {"CK", kPOL}, {"CL", kLAC}, {"CM", kSSA}, {"CN", kEAS},
    {"CO", kLAC}, {"CR", kLAC}, {"CU", kLAC}, {"CV", kSSA}, {"CW", kLAC}, {"CX", kANZ},
    {"CY", kWAS}, {"CZ", kEEU}, {"DE", kWEU}, {"DJ", kSSA}, {"DK", kNEU}, {"DM", kLAC},
    {"DO", kLAC}, {"DZ", kNAF}, {"EC", kLAC}, {"EE", kNEU}, {"EG", kNAF}, {"EH", kNAF},
    {"ER", kSSA}, {"ES", kSEU}, {"ET", kSSA}, {"FI", kNEU}, {"FJ", kMEL}, {"FK", kLAC},
    {"FM", kMIC}, {"FO", kNEU}, {"FR", kWEU}, {"GA", kSSA}, {"GB", kNEU}, {"GD", kLAC},
    {"GE", kWAS}, {"GF", kLAC}, {"GG", kNEU}, {"GH", kSSA}, {"GI", kSEU}, {"GL", kNAM},
    {"GM", kSSA}, {"GN", kSSA}, {"GP", kLAC}, {"GQ", kSSA}, {"GR", kSEU}, {"GS", kLAC},
    {"GT", kLAC}, {"GU", kMIC}, {"GW", kSSA}, {"GY", kLAC}, {"HK", kEAS}, {"HM", kANZ},
    {"HN", kLAC}, {"HR", kSEU}, {"HT", kLAC}, {"HU", kEEU}, {"ID", kSEA}, {"IE", kNEU},
    {"IL", kWAS}, {"IM", kNEU}, {"IN", kSAS}, {"IO", kSSA}, {"IQ", kWAS}, {"IR", kSAS},
    {"IS", kNEU}, {"IT", kSEU}, {"JE", kNEU}, {"JM", kLAC}, {"JO", kWAS}, {"JP", kEAS},
    {"KE", kSSA}, {"KG", kCAS}, {"KH", kSEA}, {"KI", kMIC}, {"KM", kSSA}, {"KN", kLAC},
    {"KP", kEAS}, {"KR", kEAS}, {"KW", kWAS}, {"KY", kLAC}, {"KZ", kCAS}, {"LA", kSEA},
    {"LB", kWAS}, {"LC", kLAC}, {"LI", kWEU}, {"LK", kSAS}, {"LR", kSSA}, {"LS", kSSA},
    {"LT", kNEU}, {"LU", kWEU}, {"LV", kNEU}, {"LY", kNAF}, {"MA", kNAF}, {"MC", kWEU},
    {"MD", kEEU}, {"ME", kSEU}, {"MF", kLAC}, {"MG", kSSA}, {"MH", kMIC}, {"MK", kSEU},
    {"ML", kSSA}, {"MM", kSEA}, {"MN", kEAS}, {"MO", kEAS}, {"MP", kMIC}, {"MQ", kLAC},
    {"MR", kSSA}, {"MS", kLAC}, {"MT", kSEU}, {"MU", kSSA}, {"MV", kSAS}, {"MW", kSSA},
    {"MX", kLAC}, {"MY", kSEA}, {"MZ", kSSA}, {"NA", kSSA}, {"NC", kMEL}, {"NE", kSSA},
    {"NF", kANZ}, {"NG", kSSA}, {"NI", kLAC}, {"NL", kWEU}, {"NO", kNEU}, {"NP", kSAS},
    {"NR", kMIC}, {"NU", kPOL}, {"NZ", kANZ}, {"OM", kWAS}, {"PA", kLAC}, {"PE", kLAC},
    {"PF", kPOL}, {"PG", kMEL}, {"PH", kSEA}, {"PK", kSAS}, {"PL", kEEU}, {"PM", kNAM},
    {"PN", kPOL}, {"PR", kLAC}, {"PS", kWAS}, {"PT", kSEU}, {"PW", kMIC}, {"PY", kLAC},
    {"QA", kWAS}, {"RE", kSSA}, {"RO", kEEU}, {"RS", kSEU}, {"RU", kEEU}, {"RW", kSSA},
    {"SA", kWAS}, {"SB", kMEL}, {"SC", kSSA}, {"SD", kNAF}, {"SE", kNEU}, {"SG", kSEA},
    {"SH", kSSA}, {"SI", kSEU}, {"SJ", kNEU}, {"SK", kEEU}, {"SL", kSSA}, {"SM", kSEU},
    {"SN", kSSA}, {"SO", kSSA}, {"SR", kLAC}, {"SS", kSSA}, {"ST", kSSA}, {"SV", kLAC},
    {"SX", kLAC}, {"SY", kWAS}, {"SZ", kSSA}, {"TC", kLAC}, {"TD", kSSA}, {"TF", kSSA},
    {"TG", kSSA}, {"TH", kSEA}, {"TJ", kCAS}, {"TK", kPOL}, {"TL", kSEA}, {"TM", kCAS},
    {"TN", kNAF}, {"TO", kPOL}, {"TR", kWAS}, {"TT", kLAC}, {"TV", kPOL}, {"TW", kEAS},
    {"TZ", kSSA}, {"UA", kEEU}, {"UG", kSSA}, {"UM", kMIC}, {"US", kNAM}, {"UY", kLAC},
    {"UZ", kCAS}, {"VA", kSEU}, {"VC", kLAC}, {"VE", kLAC}, {"VG", kLAC}, {"VI", kLAC},
    {"VN", kSEA}, {"VU", kMEL}, {"WF", kPOL}, {"WS", kPOL}, {"YE", kWAS}, {"YT", kSSA},
    {"ZA", kSSA}, {"ZM", kSSA}, {"ZW", kSSA},
}};

constexpr std::array<std::string_view, 45> kPool{
    // Sub-Saharan Africa
    "KE", "TZ", "UG", "RW", "ET", "NG", "GH", "SN", "CI", "ZA", "ZM", "MW", "MZ",
    // Northern Africa
    "EG", "MA", "TN",
    // Southern Asia
    "IN", "BD", "PK", "NP", "LK",
    // South-eastern Asia
    "ID", "PH", "VN", "KH", "MM", "TH",
    // Latin America and the Caribbean
    "BR", "MX", "CO", "PE", "CL", "AR", "GT", "HT",
    // Europe, Northern America, Asia-Pacific, Western Asia
    "DE", "FR", "GB", "NL", "US", "CA", "JP", "AU", "JO", "TR"};

const Entry* find(std::string_view code) {
  auto it = std::lower_bound(kCountries.begin(), kCountries.end(), code,
                             [](const Entry& e, std::string_view c) { return e.first < c; });
  if (it != kCountries.end() && it->first == code) return &*it;
  return nullptr;
}

}  // namespace

bool is_alpha2_shape(std::string_view code) {
  return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' && code[1] <= 'Z';
}

std::string region_of(std::string_view code) {
  if (!is_alpha2_shape(code)) {
    throw Error(ErrorCode::Input,
                "country code must be two uppercase letters, got '" + std::string(code) + "'");
  }
  const Entry* e = find(code);
  return std::string(e ? e->second : kUnknownRegion);
}

bool is_known_country(std::string_view code) { return is_alpha2_shape(code) && find(code); }

std::span<const std::string_view> country_pool() { return kPool; }

}  // namespace dhub::geo
