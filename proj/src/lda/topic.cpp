#include <algorithm>
#include <numeric>

#include "topicdyn/error.hpp"
#include "topicdyn/lda.hpp"

namespace topicdyn {

Topic::Topic(std::shared_ptr<const std::vector<std::string>> vocabulary, std::vector<double> probs,
             double smoothing_floor)
    : vocab_(std::move(vocabulary)), probs_(std::move(probs)), floor_(smoothing_floor) {
  if (!vocab_ || vocab_->size() != probs_.size()) {
    throw InvalidArgument("topic: vocabulary and probabilities differ in length");
  }
  order_.resize(probs_.size());
  std::iota(order_.begin(), order_.end(), 0U);
  const auto& terms = *vocab_;
  sorted_vocab_ = std::is_sorted(terms.begin(), terms.end());
  std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (probs_[a] != probs_[b]) return probs_[a] > probs_[b];
    return terms[a] < terms[b];
  });
}

Topic Topic::from_terms(const SparseVector& terms, double smoothing_floor) {
  auto vocab = std::make_shared<std::vector<std::string>>();
  std::vector<double> probs;
  vocab->reserve(terms.size());
  probs.reserve(terms.size());
  for (const TermWeight& entry : terms) {
    vocab->push_back(entry.term);
    probs.push_back(entry.weight);
  }
  Topic topic(std::move(vocab), std::move(probs), smoothing_floor);
  topic.truncated_ = true;
  return topic;
}

double Topic::total_mass() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

double Topic::probability(const std::string& term) const {
  const auto& terms = *vocab_;
  if (sorted_vocab_) {
    const auto it = std::lower_bound(terms.begin(), terms.end(), term);
    if (it != terms.end() && *it == term) return probs_[static_cast<std::size_t>(it - terms.begin())];
    return 0.0;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] == term) return probs_[i];
  }
  return 0.0;
}

SparseVector Topic::top_terms(std::size_t k) const {
  SparseVector out;
  const std::size_t n = std::min(k, order_.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({(*vocab_)[order_[i]], probs_[order_[i]]});
  }
  return out;
}

SparseVector topic_vector(const Topic& topic, std::size_t k) {
  if (k == 0) throw InvalidArgument("topic_vector: k must be >= 1");
  SparseVector ranked = topic.top_terms(k);
  const double floor = topic.smoothing_floor();
  // Ranked descending, so everything after the first floor entry is floor too.
  const auto cut = std::find_if(ranked.begin(), ranked.end(),
                                [floor](const TermWeight& e) { return !(e.weight > floor); });
  ranked.erase(cut, ranked.end());
  return ranked;
}

bool same_topics(const TopicModel& a, const TopicModel& b, std::size_t k) {
  if (!(a.config == b.config) || a.topics.size() != b.topics.size()) return false;
  for (std::size_t i = 0; i < a.topics.size(); ++i) {
    if (topic_vector(a.topics[i], k) != topic_vector(b.topics[i], k)) return false;
  }
  return true;
}

}  // namespace topicdyn
