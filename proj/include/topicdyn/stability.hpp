#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "topicdyn/corpus.hpp"
#include "topicdyn/lda.hpp"

namespace topicdyn {

using TermRanking = std::vector<std::string>;

enum class MatchingMode { kGreedy, kOptimal };

std::string_view to_string(MatchingMode mode);
MatchingMode parse_matching_mode(std::string_view text);

/// Mean over d = 1..top of the Jaccard index between the top-d prefixes.
/// Rankings shorter than d contribute their whole list.
double average_jaccard(const TermRanking& a, const TermRanking& b, std::size_t top);

/// Pairs topics one-to-one by descending average Jaccard and returns the mean
/// pair score over max(|a|, |b|) topics; unpaired topics score 0. Greedy ties
/// are broken by ranking content, so the result does not depend on topic order.
double matched_average_jaccard(const std::vector<TermRanking>& a,
                               const std::vector<TermRanking>& b, std::size_t top,
                               MatchingMode mode = MatchingMode::kGreedy);

/// Top-`top` terms of every topic (terms assigned at least once).
std::vector<TermRanking> topic_rankings(const TopicModel& model, std::size_t top);

struct StabilityScanConfig {
  int k_min = 10;
  int k_max = 50;
  int step = 20;
  int reference_runs = 1;
  int bootstrap_runs = 5;
  std::size_t top_terms = 20;
  double sample_fraction = 0.8;
  MatchingMode matching = MatchingMode::kGreedy;
  // Train bootstrap models with the reference seed instead of derived ones.
  bool reuse_reference_seed = false;
  LdaConfig lda;  // num_topics is overridden per K
  std::size_t workers = 0;

  /// Throws InvalidArgument when out of range.
  void validate() const;
  /// kMin, kMin + step, ... <= kMax.
  std::vector<int> topic_counts() const;
};

struct StabilityPoint {
  int num_topics = 0;
  std::optional<double> score;  // empty when K exceeds the distinct-term count
  int runs = 0;                 // reference x bootstrap comparisons averaged
};

/// Stability score per candidate K: mean matched agreement between each
/// reference model (full window) and each bootstrap model (document
/// subsample of sample_fraction, original order kept).
std::vector<StabilityPoint> stability_scan(std::span<const Document* const> documents,
                                           const StabilityScanConfig& config);
std::vector<StabilityPoint> stability_scan(const TimeWindow& window,
                                           const StabilityScanConfig& config);

/// Columns: K,score,runs. A missing score is an empty field.
void write_stability_csv(const std::vector<StabilityPoint>& points, std::ostream& out);

}  // namespace topicdyn
