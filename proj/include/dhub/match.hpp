#pragma once

// Explainable six-dimension compatibility scoring.
//
// Each dimension yields a normalized score in [0, 1]; the composite is
// 100 * sum(weight_k * score_k) on a 0-100 point scale, reported together with
// the per-dimension contributions that make it up. Everything here is a pure
// function of its arguments.

#include "dhub/model.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dhub::match {

/// Normalized dimension scores indexed by Dimension.
using ScoreVector = std::array<double, kDimensionCount>;

// Per-dimension scores --------------------------------------------------------

/// 1.0 exact country, 0.8 GLOBAL coverage, 0.5 same sub-region, else 0.0.
double geographic_fit(const Challenge& challenge, const Solution& solution);
/// 1.0 when the lead time fits the window, otherwise window / lead.
double temporal_fit(const Challenge& challenge, const Solution& solution);
/// min(budget / cost, 1).
double budget_fit(const Challenge& challenge, const Solution& solution);
/// Jaccard similarity of the tag sets, each extended with its domain tag.
double capability_fit(const Challenge& challenge, const Solution& solution);
/// 0.5 * verified + 0.5 * (successful + 1) / (completed + 2).
double provider_credibility(const Solution& solution, const Organization& provider);
/// min(capacity / affected, 1).
double population_alignment(const Challenge& challenge, const Solution& solution);

// Composite ---------------------------------------------------------------------

/// Weighted breakdown for an already-computed score vector. Reasons are the
/// generic template sentence (dimension, raw score, weight).
std::vector<DimensionScore> weigh(const ScoreVector& scores, const WeightProfile& profile);

/// Sum of contributions, clamped to [0, 100].
double total_of(const std::vector<DimensionScore>& breakdown);

/// Scores one challenge/solution pair. `provider` must be the organization the
/// solution references (ErrorCode::Input otherwise).
MatchResult score_pair(const Challenge& challenge, const Solution& solution,
                       const Organization& provider, const WeightProfile& profile,
                       Timestamp computed_at = {});

struct Candidate {
  std::reference_wrapper<const Solution> solution;
  std::reference_wrapper<const Organization> provider;
};

struct RankedMatch {
  int rank = 0;
  MatchResult match;

  friend bool operator==(const RankedMatch&, const RankedMatch&) = default;
};

/// Scores every candidate, orders by total descending then solution id
/// ascending, truncates to `top_k` and assigns ranks 1..n.
/// top_k <= 0 is an input error.
std::vector<RankedMatch> rank_solutions(const Challenge& challenge,
                                        std::span<const Candidate> candidates,
                                        const WeightProfile& profile,
                                        std::optional<int> top_k = std::nullopt,
                                        Timestamp computed_at = {});

// Calibration -------------------------------------------------------------------

/// Divides each raw weight by their sum. Result weights are quantized to 1e-12
/// so that scaling all raw weights by a positive constant yields the identical
/// profile. Negative, non-finite or all-zero input is an input error.
/// The id is `kDefaultProfileId` when the result equals the default weights,
/// otherwise "wpf-" followed by a hash of the weights.
WeightProfile normalize_profile(const WeightVector& raw);

std::string profile_id_for(const WeightVector& weights);

// Explanation -------------------------------------------------------------------

/// Seven lines: one per dimension in fixed order, then the total.
std::vector<std::string> explain(const MatchResult& match);

/// One-decimal display values for the six contributions, apportioned so they
/// sum exactly to the half-up rounded total. Values are in tenths of a point.
std::array<long long, kDimensionCount> display_tenths(const MatchResult& match);

/// Half-up rounding of a non-negative value to tenths.
long long round_half_up_tenths(double value);
std::string format_tenths(long long tenths);
/// Fixed-point, half-up, for non-negative values.
std::string format_fixed(double value, int decimals);

std::string_view dimension_label(Dimension d);

}  // namespace dhub::match
