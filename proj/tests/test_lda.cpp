#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "topicdyn/dynamics.hpp"
#include "topicdyn/error.hpp"
#include "topicdyn/lda.hpp"
#include "topicdyn/simd.hpp"

using namespace topicdyn;

namespace {

std::vector<const Document*> ptrs(const std::vector<Document>& docs) {
  std::vector<const Document*> out;
  for (const auto& d : docs) out.push_back(&d);
  return out;
}

LdaConfig quick(int k, std::uint64_t seed = 7, int iterations = 200) {
  LdaConfig c;
  c.num_topics = k;
  c.seed = seed;
  c.iterations = iterations;
  return c;
}

double full_cosine(const Topic& topic, const std::map<std::string, double>& planted) {
  double dot = 0.0, nt = 0.0, np = 0.0;
  const auto& vocab = topic.vocabulary();
  const auto probs = topic.probabilities();
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    nt += probs[i] * probs[i];
    if (auto it = planted.find(vocab[i]); it != planted.end()) dot += probs[i] * it->second;
  }
  for (const auto& [t, p] : planted) np += p * p;
  return dot / std::sqrt(nt * np);
}

}  // namespace

TEST(LdaConfig, DefaultsAndValidation) {
  LdaConfig c;
  EXPECT_EQ(c.num_topics, 27);
  EXPECT_DOUBLE_EQ(c.beta, 0.01);
  EXPECT_EQ(c.iterations, 1000);
  EXPECT_DOUBLE_EQ(c.effective_alpha(), 50.0 / 27.0);
  c.alpha = 0.3;
  EXPECT_DOUBLE_EQ(c.effective_alpha(), 0.3);
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW((LdaConfig{.num_topics = 0}.validate()), InvalidArgument);
  EXPECT_THROW((LdaConfig{.beta = 0.0}.validate()), InvalidArgument);
  EXPECT_THROW((LdaConfig{.iterations = 0}.validate()), InvalidArgument);
}

TEST(Lda, EmptyWindowIsAnError) {
  std::vector<const Document*> none;
  EXPECT_THROW(train_lda(none, quick(2)), InvalidArgument);
  const Document empty = testutil::make_doc("e", 2000, {});
  std::vector<const Document*> one{&empty};
  EXPECT_THROW(train_lda(one, quick(2)), InvalidArgument);
  TimeWindow w;
  w.usable = false;
  EXPECT_THROW(train_lda(w, quick(2)), InvalidArgument);
}

TEST(Lda, CountConservationAtEverySweep) {
  const auto corpus = testutil::planted_corpus(3, 20, 5, 80, 11);
  const auto docs = ptrs(corpus.documents);
  GibbsSampler sampler(docs, quick(4));
  std::int64_t tokens = 0;
  for (const auto& d : corpus.documents) tokens += d.total_tokens();
  ASSERT_EQ(static_cast<std::int64_t>(sampler.num_tokens()), tokens);
  EXPECT_EQ(sampler.assigned_tokens(), tokens);
  for (int s = 0; s < 25; ++s) {
    sampler.sweep();
    EXPECT_EQ(sampler.assigned_tokens(), tokens);
    const auto dt = sampler.doc_topic_counts();
    EXPECT_EQ(std::accumulate(dt.begin(), dt.end(), std::int64_t{0}), tokens);
    const auto wt = sampler.word_topic_counts();
    EXPECT_EQ(std::accumulate(wt.begin(), wt.end(), std::int64_t{0}), tokens);
    EXPECT_TRUE(std::all_of(dt.begin(), dt.end(), [](std::int32_t x) { return x >= 0; }));
  }
  EXPECT_EQ(sampler.sweeps_done(), 25u);
}

TEST(Lda, TopicsAreNormalizedDistributions) {
  const auto corpus = testutil::planted_corpus(2, 30, 6, 100, 5);
  const TopicModel m = train_lda(ptrs(corpus.documents), quick(3));
  ASSERT_EQ(m.num_topics(), 3u);
  for (const Topic& t : m.topics) {
    EXPECT_NEAR(t.total_mass(), 1.0, 1e-9);
    for (double p : t.probabilities()) {
      EXPECT_GT(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
  EXPECT_EQ(m.doc_topic_counts.size(), m.num_documents * 3);
}

TEST(Lda, SeedDeterminism) {
  const auto corpus = testutil::planted_corpus(2, 30, 6, 100, 5);
  const auto docs = ptrs(corpus.documents);
  const TopicModel a = train_lda(docs, quick(3, 99));
  const TopicModel b = train_lda(docs, quick(3, 99));
  EXPECT_EQ(a.doc_topic_counts, b.doc_topic_counts);
  for (std::size_t k = 0; k < a.topics.size(); ++k) {
    const auto pa = a.topics[k].probabilities(), pb = b.topics[k].probabilities();
    EXPECT_TRUE(std::equal(pa.begin(), pa.end(), pb.begin(), pb.end()));
  }
  const TopicModel c = train_lda(docs, quick(3, 100));
  EXPECT_NE(a.doc_topic_counts, c.doc_topic_counts);
}

TEST(Lda, ScalarAndVectorKernelsTrainIdenticalModels) {
  const auto corpus = testutil::planted_corpus(2, 25, 5, 90, 8);
  const auto docs = ptrs(corpus.documents);
  const simd::Isa before = simd::active_isa();
  std::vector<std::vector<std::int32_t>> counts;
  for (simd::Isa isa : simd::supported_isas()) {
    simd::set_isa(isa);
    counts.push_back(train_lda(docs, quick(5, 3, 50)).doc_topic_counts);
  }
  simd::set_isa(before);
  for (const auto& c : counts) EXPECT_EQ(c, counts.front());
}

TEST(Lda, PlantedTopicRecovery) {
  const auto corpus = testutil::planted_corpus(2, 40, 15, 300, 21);
  const TopicModel m = train_lda(ptrs(corpus.documents), quick(2, 1, 300));
  const double direct = std::min(full_cosine(m.topics[0], corpus.planted[0]), full_cosine(m.topics[1], corpus.planted[1]));
  const double swapped = std::min(full_cosine(m.topics[0], corpus.planted[1]), full_cosine(m.topics[1], corpus.planted[0]));
  EXPECT_GE(std::max(direct, swapped), 0.8);
  for (const Topic& t : m.topics) {
    const auto top = t.top_terms(10);
    const char pool = top.front().term[4];
    for (const auto& tw : top) EXPECT_EQ(tw.term[4], pool) << tw.term;
  }
}

TEST(Lda, SingleTopicCollapsesToMarginalFrequencies) {
  const auto corpus = testutil::planted_corpus(3, 20, 4, 150, 2);
  const TopicModel m = train_lda(ptrs(corpus.documents), quick(1, 4, 20));
  std::map<std::string, double> freq;
  double total = 0.0;
  for (const auto& d : corpus.documents) {
    for (const auto& [t, n] : d.counts) {
      freq[t] += static_cast<double>(n);
      total += static_cast<double>(n);
    }
  }
  double l1 = 0.0;
  for (const auto& [t, n] : freq) l1 += std::abs(m.topics[0].probability(t) - n / total);
  EXPECT_LE(l1, 0.05);
}

TEST(Lda, MoreTopicsThanTermsProceeds) {
  const Document d = testutil::make_doc("d", 2000, {{"alpha", 3}, {"beta", 2}});
  std::vector<const Document*> docs{&d};
  const TopicModel m = train_lda(docs, quick(4));
  EXPECT_EQ(m.num_topics(), 4u);
}

TEST(Topic, TopTermsOrderingAndTieBreak) {
  auto vocab = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{"delta", "alpha", "charlie", "bravo"});
  const Topic t(vocab, {0.25, 0.25, 0.4, 0.1}, 0.0);
  const auto top = t.top_terms(3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].term, "charlie");
  EXPECT_EQ(top[1].term, "alpha");
  EXPECT_EQ(top[2].term, "delta");
  EXPECT_DOUBLE_EQ(t.probability("bravo"), 0.1);
  EXPECT_DOUBLE_EQ(t.probability("nope"), 0.0);
}

TEST(TopicVector, Examples) {
  auto vocab = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{"a", "b", "c", "d", "e"});
  // Two terms sit at the smoothing floor and are excluded.
  const Topic t(vocab, {0.5, 0.2, 0.1, 0.1, 0.1}, 0.1);
  const SparseVector v = topic_vector(t, 100);
  ASSERT_EQ(v.size(), 2u);
  const SparseVector one = topic_vector(t, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].term, "a");
  const Topic three = Topic::from_terms({{"x", 0.5}, {"y", 0.3}, {"z", 0.2}});
  EXPECT_EQ(topic_vector(three, 100).size(), 3u);
  EXPECT_THROW(topic_vector(t, 0), InvalidArgument);
}

TEST(TopicVector, TiesAtCutoffAreLexicographic) {
  auto vocab = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{"pear", "apple", "fig", "kiwi"});
  const Topic t(vocab, {0.3, 0.3, 0.3, 0.1}, 0.0);
  const SparseVector v = topic_vector(t, 2);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].term, "apple");
  EXPECT_EQ(v[1].term, "fig");
  EXPECT_EQ(topic_vector(t, 2), v);
}

TEST(ModelIo, RoundTrip) {
  testutil::TempDir dir;
  const auto corpus = testutil::planted_corpus(2, 30, 6, 100, 5);
  TopicModel m = train_lda(ptrs(corpus.documents), quick(3), WindowInfo{1950, 1960, "1950-1960"});
  m.cache_key = "abc";
  const std::string path = dir.file(model_file_name(m));
  EXPECT_EQ(model_file_name(m), "model_1950_1960_K3.json");
  save_model(m, path);
  const TopicModel back = load_model(path);
  EXPECT_TRUE(same_topics(m, back));
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.window.start, 1950);
  EXPECT_EQ(back.window.id, "1950-1960");
  EXPECT_EQ(back.cache_key, "abc");
  EXPECT_EQ(back.num_documents, m.num_documents);
  // Full-precision serialization keeps similarities bit-identical.
  const auto s1 = cross_window_similarity(m.topics, m.topics);
  const auto s2 = cross_window_similarity(back.topics, back.topics);
  const auto s3 = cross_window_similarity(m.topics, back.topics);
  EXPECT_EQ(s1.values, s2.values);
  EXPECT_EQ(s1.values, s3.values);
}

TEST(ModelIo, SchemaViolationsAreFatal) {
  testutil::TempDir dir;
  const auto corpus = testutil::planted_corpus(1, 10, 2, 30, 5);
  const TopicModel m = train_lda(ptrs(corpus.documents), quick(2));
  save_model(m, dir.file("m.json"));
  nlohmann::json doc = nlohmann::json::parse(testutil::read_file(dir.file("m.json")));

  auto without_topics = doc;
  without_topics.erase("topics");
  testutil::write_file(dir.file("a.json"), without_topics.dump());
  EXPECT_THROW(load_model(dir.file("a.json")), FormatError);

  auto bad_version = doc;
  bad_version["version"] = 99;
  testutil::write_file(dir.file("b.json"), bad_version.dump());
  EXPECT_THROW(load_model(dir.file("b.json")), FormatError);

  testutil::write_file(dir.file("c.json"), "{not json");
  EXPECT_THROW(load_model(dir.file("c.json")), FormatError);
  EXPECT_THROW(load_model(dir.file("missing.json")), IoError);
}
