#pragma once

#include "dhub/dataset.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dhub::synth {

inline constexpr std::string_view kGeneratorVersion = "1.0.0";
inline constexpr int kCountryPoolSize = 45;

struct GenConfig {
  std::uint64_t seed = 42;
  int n_orgs = 250;
  int n_challenges = 120;
  int n_solutions = 150;
};

struct Share {
  std::string label;
  int percent = 0;
};

/// Largest-remainder apportionment of `n` units. Ties in the fractional
/// remainder go to the label listed first. Percentages must sum to 100.
std::vector<std::pair<std::string, int>> quota_split(int n, std::span<const Share> shares);

/// Deployer 35, Provider 38, Financier 27.
std::vector<Share> role_shares();
/// Agriculture 30, Water 20, Energy 20, Health 15, Education 15.
std::vector<Share> domain_shares();

/// Capability vocabulary for a domain (eight tags, fixed order).
std::span<const std::string_view> capability_vocabulary(Domain domain);

/// Deterministic synthetic ecosystem. Throws ErrorCode::Config for
/// n_orgs < 3, negative counts, or when challenges/solutions are requested
/// but no deployer/provider exists.
Dataset generate(const GenConfig& config);

}  // namespace dhub::synth
