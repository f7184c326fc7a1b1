#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "topicdyn/corpus.hpp"

namespace topicdyn {

struct LdaConfig {
  int num_topics = 27;
  double alpha = 0.0;  // <= 0 selects 50 / K
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 42;

  double effective_alpha() const { return alpha > 0.0 ? alpha : 50.0 / num_topics; }
  /// Throws InvalidArgument when out of range.
  void validate() const;
  bool operator==(const LdaConfig&) const = default;
};

struct TermWeight {
  std::string term;
  double weight = 0.0;
  bool operator==(const TermWeight&) const = default;
};

using SparseVector = std::vector<TermWeight>;

/// A term-probability vector. Trained topics cover the window's whole
/// vocabulary; topics read back from a model file only carry their saved
/// top terms (truncated()).
class Topic {
 public:
  Topic() = default;
  Topic(std::shared_ptr<const std::vector<std::string>> vocabulary, std::vector<double> probs,
        double smoothing_floor);
  /// Builds a truncated topic from ranked (term, probability) pairs.
  static Topic from_terms(const SparseVector& terms, double smoothing_floor = 0.0);

  std::size_t size() const { return probs_.size(); }
  bool truncated() const { return truncated_; }
  double smoothing_floor() const { return floor_; }
  double total_mass() const;
  double probability(const std::string& term) const;

  /// The k most probable terms, descending, ties broken lexicographically.
  SparseVector top_terms(std::size_t k) const;
  const std::vector<std::string>& vocabulary() const { return *vocab_; }
  std::span<const double> probabilities() const { return probs_; }

 private:
  std::shared_ptr<const std::vector<std::string>> vocab_ =
      std::make_shared<const std::vector<std::string>>();
  std::vector<double> probs_;
  std::vector<std::uint32_t> order_;  // indices into probs_, ranked
  double floor_ = 0.0;
  bool truncated_ = false;
  bool sorted_vocab_ = true;  // enables binary search in probability()
};

/// Top-k entries of the topic whose probability exceeds the smoothing floor
/// (terms never assigned to the topic are excluded).
SparseVector topic_vector(const Topic& topic, std::size_t k = 100);

struct WindowInfo {
  int start = 0;
  int end = 0;
  std::string id;
};

struct TopicModel {
  WindowInfo window;
  LdaConfig config;
  std::vector<Topic> topics;
  std::vector<std::int32_t> doc_topic_counts;  // D x K row-major
  std::size_t num_documents = 0;
  std::size_t vocabulary_size = 0;
  std::string cache_key;

  std::size_t num_topics() const { return topics.size(); }
};

/// Collapsed Gibbs sampler over one set of documents. Single-threaded.
class GibbsSampler {
 public:
  GibbsSampler(std::span<const Document* const> documents, const LdaConfig& config);

  void sweep();
  void run();  // config.iterations sweeps
  std::size_t sweeps_done() const { return sweeps_; }

  std::size_t num_tokens() const { return word_of_token_.size(); }
  std::size_t vocabulary_size() const { return vocabulary_->size(); }
  /// Sum over topics of n_k. Equals num_tokens() at every sweep boundary.
  std::int64_t assigned_tokens() const;
  std::span<const std::int32_t> doc_topic_counts() const { return doc_topic_; }
  std::span<const std::int32_t> word_topic_counts() const { return word_topic_; }

  TopicModel model(const WindowInfo& window) const;

 private:
  void sample_token(std::size_t token);

  LdaConfig config_;
  std::size_t num_topics_;
  double alpha_;
  double vocab_beta_;
  std::shared_ptr<std::vector<std::string>> vocabulary_;
  std::vector<std::int32_t> word_of_token_;
  std::vector<std::int32_t> doc_of_token_;
  std::vector<std::int32_t> topic_of_token_;
  std::vector<std::int32_t> doc_topic_;   // D x K
  std::vector<std::int32_t> word_topic_;  // V x K
  std::vector<std::int32_t> topic_total_; // K
  std::vector<double> weights_;
  std::size_t num_documents_;
  std::size_t sweeps_ = 0;
  std::mt19937_64 rng_;
};

/// Trains an independent LDA over the documents. Throws InvalidArgument when
/// there are no documents or no tokens.
TopicModel train_lda(std::span<const Document* const> documents, const LdaConfig& config,
                     const WindowInfo& window = {});
/// Same, refusing windows flagged unusable.
TopicModel train_lda(const TimeWindow& window, const LdaConfig& config);

/// JSON model files: config, window metadata and per-topic top terms at full
/// precision. `saved_terms` bounds the number of terms written per topic.
void save_model(const TopicModel& model, const std::string& path, std::size_t saved_terms = 100);
TopicModel load_model(const std::string& path);
std::string model_file_name(const TopicModel& model);

/// Equal configs and equal top-k term lists for every topic.
bool same_topics(const TopicModel& a, const TopicModel& b, std::size_t k = 100);

}  // namespace topicdyn
