#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "topicdyn/error.hpp"
#include "topicdyn/parallel.hpp"
#include "topicdyn/report_io.hpp"
#include "topicdyn/stability.hpp"

namespace topicdyn {

namespace {

// Square assignment maximizing the total score (Hungarian method on 1 - score).
std::vector<std::size_t> optimal_assignment(const std::vector<std::vector<double>>& score) {
  const std::size_t n = score.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (1.0 - score[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

std::size_t distinct_terms(std::span<const Document* const> documents) {
  std::unordered_set<std::string> terms;
  for (const Document* d : documents) {
    for (const auto& entry : d->counts) terms.insert(entry.first);
  }
  return terms.size();
}

}  // namespace

std::string_view to_string(MatchingMode mode) {
  return mode == MatchingMode::kGreedy ? "greedy" : "optimal";
}

MatchingMode parse_matching_mode(std::string_view text) {
  if (text == "greedy") return MatchingMode::kGreedy;
  if (text == "optimal") return MatchingMode::kOptimal;
  throw InvalidArgument("unknown matching mode \"" + std::string(text) + "\"");
}

double average_jaccard(const TermRanking& a, const TermRanking& b, std::size_t top) {
  if (top == 0) throw InvalidArgument("average Jaccard needs top >= 1");
  std::set<std::string> prefix_a, prefix_b;
  std::size_t intersection = 0;
  double total = 0.0;
  for (std::size_t d = 0; d < top; ++d) {
    if (d < a.size() && prefix_a.insert(a[d]).second && prefix_b.count(a[d])) ++intersection;
    if (d < b.size() && prefix_b.insert(b[d]).second && prefix_a.count(b[d])) ++intersection;
    const std::size_t uni = prefix_a.size() + prefix_b.size() - intersection;
    total += uni == 0 ? 1.0 : static_cast<double>(intersection) / static_cast<double>(uni);
  }
  return total / static_cast<double>(top);
}

double matched_average_jaccard(const std::vector<TermRanking>& a,
                               const std::vector<TermRanking>& b, std::size_t top,
                               MatchingMode mode) {
  if (a.empty() || b.empty()) throw InvalidArgument("matched average Jaccard needs topics on both sides");
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<std::vector<double>> score(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) score[i][j] = average_jaccard(a[i], b[j], top);
  }

  double sum = 0.0;
  if (mode == MatchingMode::kOptimal) {
    const auto assignment = optimal_assignment(score);
    for (std::size_t i = 0; i < n; ++i) sum += score[i][assignment[i]];
  } else {
    struct Pair {
      double score;
      std::size_t i, j;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({score[i][j], i, j});
    }
    std::sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
      if (x.score != y.score) return x.score > y.score;
      if (a[x.i] != a[y.i]) return a[x.i] < a[y.i];
      return b[x.j] < b[y.j];
    });
    std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
    for (const Pair& p : pairs) {
      if (used_a[p.i] || used_b[p.j]) continue;
      used_a[p.i] = used_b[p.j] = true;
      sum += p.score;
    }
  }
  return std::clamp(sum / static_cast<double>(n), 0.0, 1.0);
}

std::vector<TermRanking> topic_rankings(const TopicModel& model, std::size_t top) {
  std::vector<TermRanking> out;
  for (const Topic& topic : model.topics) {
    TermRanking ranking;
    for (const TermWeight& tw : topic_vector(topic, top)) ranking.push_back(tw.term);
    out.push_back(std::move(ranking));
  }
  return out;
}

void StabilityScanConfig::validate() const {
  if (k_min < 1) throw InvalidArgument("stability scan: kMin must be >= 1");
  if (k_min > k_max) throw InvalidArgument("stability scan: kMin must not exceed kMax");
  if (step < 1) throw InvalidArgument("stability scan: step must be >= 1");
  if (top_terms < 1) throw InvalidArgument("stability scan: topT must be >= 1");
  if (reference_runs < 1 || bootstrap_runs < 1) {
    throw InvalidArgument("stability scan: run counts must be >= 1");
  }
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw InvalidArgument("stability scan: sampleFraction must lie in (0, 1]");
  }
  LdaConfig probe = lda;
  probe.num_topics = k_min;
  probe.validate();
}

std::vector<int> StabilityScanConfig::topic_counts() const {
  std::vector<int> ks;
  for (int k = k_min; k <= k_max; k += step) ks.push_back(k);
  return ks;
}

std::vector<StabilityPoint> stability_scan(std::span<const Document* const> documents,
                                           const StabilityScanConfig& config) {
  config.validate();
  if (documents.empty()) throw InvalidArgument("stability scan needs documents");
  const std::size_t vocabulary = distinct_terms(documents);
  const std::vector<int> ks = config.topic_counts();
  std::vector<StabilityPoint> points(ks.size());

  const std::size_t sample_size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.sample_fraction * static_cast<double>(documents.size()))));

  parallel_for(ks.size(), config.workers, [&](std::size_t p) {
    const int k = ks[p];
    StabilityPoint& point = points[p];
    point.num_topics = k;
    if (static_cast<std::size_t>(k) > vocabulary) return;

    std::vector<std::vector<TermRanking>> references;
    std::vector<std::uint64_t> reference_seeds;
    for (int r = 0; r < config.reference_runs; ++r) {
      LdaConfig lda = config.lda;
      lda.num_topics = k;
      lda.seed = r == 0 ? config.lda.seed : derive_seed(config.lda.seed, 1000 + r);
      reference_seeds.push_back(lda.seed);
      references.push_back(topic_rankings(train_lda(documents, lda), config.top_terms));
    }

    double total = 0.0;
    for (int b = 0; b < config.bootstrap_runs; ++b) {
      const std::uint64_t stream = static_cast<std::uint64_t>(k) * 1000003ULL + static_cast<std::uint64_t>(b);
      std::vector<std::size_t> order(documents.size());
      std::iota(order.begin(), order.end(), 0);
      if (sample_size < documents.size()) {
        std::mt19937_64 rng(derive_seed(config.lda.seed, stream));
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(sample_size);
        std::sort(order.begin(), order.end());
      }
      std::vector<const Document*> subsample;
      for (std::size_t i : order) subsample.push_back(documents[i]);

      LdaConfig lda = config.lda;
      lda.num_topics = k;
      lda.seed = config.reuse_reference_seed ? reference_seeds.front()
                                             : derive_seed(config.lda.seed ^ 0xb007ULL, stream);
      const auto rankings = topic_rankings(train_lda(subsample, lda), config.top_terms);
      for (const auto& reference : references) {
        total += matched_average_jaccard(reference, rankings, config.top_terms, config.matching);
        ++point.runs;
      }
    }
    point.score = total / static_cast<double>(point.runs);
  });
  return points;
}

std::vector<StabilityPoint> stability_scan(const TimeWindow& window,
                                           const StabilityScanConfig& config) {
  if (!window.usable || window.documents.empty()) {
    throw InvalidArgument("unusable window " + window.label());
  }
  return stability_scan(std::span<const Document* const>(window.documents), config);
}

void write_stability_csv(const std::vector<StabilityPoint>& points, std::ostream& out) {
  out << "K,score,runs\n";
  for (const StabilityPoint& p : points) {
    out << p.num_topics << ',' << (p.score ? format_double(*p.score) : std::string()) << ','
        << p.runs << '\n';
  }
}

}  // namespace topicdyn
