#include <algorithm>
#include <iostream>
#include <map>

#include "topicdyn/error.hpp"
#include "topicdyn/lda.hpp"
#include "topicdyn/simd.hpp"

namespace topicdyn {

void LdaConfig::validate() const {
  if (num_topics < 1) throw InvalidArgument("LDA: number of topics must be >= 1");
  if (!(alpha >= 0.0)) throw InvalidArgument("LDA: alpha must be positive (0 selects 50/K)");
  if (!(beta > 0.0)) throw InvalidArgument("LDA: beta must be positive");
  if (iterations < 1) throw InvalidArgument("LDA: iterations must be >= 1");
}

namespace {

// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

GibbsSampler::GibbsSampler(std::span<const Document* const> documents, const LdaConfig& config)
    : config_(config),
      num_topics_(static_cast<std::size_t>(config.num_topics)),
      alpha_(config.effective_alpha()),
      vocabulary_(std::make_shared<std::vector<std::string>>()),
      num_documents_(documents.size()),
      rng_(config.seed) {
  config_.validate();
  if (documents.empty()) throw InvalidArgument("unusable window: no documents");

  std::map<std::string, std::int32_t> ids;
  for (const Document* doc : documents) {
    for (const auto& [term, count] : doc->counts) ids.emplace(term, 0);
  }
  vocabulary_->reserve(ids.size());
  for (auto& [term, id] : ids) {
    id = static_cast<std::int32_t>(vocabulary_->size());
    vocabulary_->push_back(term);
  }

  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (const auto& [term, count] : documents[d]->counts) {
      const std::int32_t word = ids.at(term);
      for (std::int64_t c = 0; c < count; ++c) {
        word_of_token_.push_back(word);
        doc_of_token_.push_back(static_cast<std::int32_t>(d));
      }
    }
  }
  if (word_of_token_.empty()) throw InvalidArgument("unusable window: no tokens");
  if (num_topics_ > vocabulary_->size()) {
    std::clog << "warning: " << num_topics_ << " topics exceed " << vocabulary_->size()
              << " distinct terms\n";
  }

  const std::size_t vocab = vocabulary_->size();
  vocab_beta_ = static_cast<double>(vocab) * config_.beta;
  doc_topic_.assign(num_documents_ * num_topics_, 0);
  word_topic_.assign(vocab * num_topics_, 0);
  topic_total_.assign(num_topics_, 0);
  weights_.assign(num_topics_, 0.0);
  topic_of_token_.resize(word_of_token_.size());

  for (std::size_t t = 0; t < word_of_token_.size(); ++t) {
    const auto topic = static_cast<std::int32_t>(unit_uniform(rng_) * static_cast<double>(num_topics_));
    topic_of_token_[t] = topic;
    ++doc_topic_[static_cast<std::size_t>(doc_of_token_[t]) * num_topics_ + topic];
    ++word_topic_[static_cast<std::size_t>(word_of_token_[t]) * num_topics_ + topic];
    ++topic_total_[static_cast<std::size_t>(topic)];
  }
}

void GibbsSampler::sample_token(std::size_t token) {
  const std::size_t doc = static_cast<std::size_t>(doc_of_token_[token]);
  const std::size_t word = static_cast<std::size_t>(word_of_token_[token]);
  const std::size_t old_topic = static_cast<std::size_t>(topic_of_token_[token]);
  std::int32_t* doc_row = doc_topic_.data() + doc * num_topics_;
  std::int32_t* word_row = word_topic_.data() + word * num_topics_;

  --doc_row[old_topic];
  --word_row[old_topic];
  --topic_total_[old_topic];

  const simd::GibbsTerms terms{doc_row, word_row, topic_total_.data(), alpha_, config_.beta,
                               vocab_beta_};
  simd::kernels().gibbs_weights(terms, weights_.data(), num_topics_);
  double running = 0.0;
  for (double& w : weights_) {
    running += w;
    w = running;
  }
  const double target = unit_uniform(rng_) * running;
  const auto it = std::upper_bound(weights_.begin(), weights_.end(), target);
  const std::size_t new_topic =
      it == weights_.end() ? num_topics_ - 1 : static_cast<std::size_t>(it - weights_.begin());

  topic_of_token_[token] = static_cast<std::int32_t>(new_topic);
  ++doc_row[new_topic];
  ++word_row[new_topic];
  ++topic_total_[new_topic];
}

void GibbsSampler::sweep() {
  for (std::size_t t = 0; t < word_of_token_.size(); ++t) sample_token(t);
  ++sweeps_;
}

void GibbsSampler::run() {
  for (int i = 0; i < config_.iterations; ++i) sweep();
}

std::int64_t GibbsSampler::assigned_tokens() const {
  std::int64_t total = 0;
  for (const std::int32_t n : topic_total_) total += n;
  return total;
}

TopicModel GibbsSampler::model(const WindowInfo& window) const {
  TopicModel model;
  model.window = window;
  model.config = config_;
  model.num_documents = num_documents_;
  model.vocabulary_size = vocabulary_->size();
  model.doc_topic_counts = doc_topic_;

  const std::size_t vocab = vocabulary_->size();
  std::shared_ptr<const std::vector<std::string>> shared_vocab = vocabulary_;
  model.topics.reserve(num_topics_);
  for (std::size_t k = 0; k < num_topics_; ++k) {
    const double denominator = static_cast<double>(topic_total_[k]) + vocab_beta_;
    std::vector<double> probs(vocab);
    for (std::size_t w = 0; w < vocab; ++w) {
      probs[w] = (static_cast<double>(word_topic_[w * num_topics_ + k]) + config_.beta) / denominator;
    }
    model.topics.emplace_back(shared_vocab, std::move(probs), config_.beta / denominator);
  }
  return model;
}

TopicModel train_lda(std::span<const Document* const> documents, const LdaConfig& config,
                     const WindowInfo& window) {
  GibbsSampler sampler(documents, config);
  sampler.run();
  return sampler.model(window);
}

TopicModel train_lda(const TimeWindow& window, const LdaConfig& config) {
  if (!window.usable || window.documents.empty()) {
    throw InvalidArgument("unusable window " + window.label());
  }
  return train_lda(window.documents, config, WindowInfo{window.start, window.end, window.label()});
}

}  // namespace topicdyn
