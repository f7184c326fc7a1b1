#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "topicdyn/dynamics.hpp"
#include "topicdyn/error.hpp"

using namespace topicdyn;

namespace {

SimilarityMatrix S(const std::vector<std::vector<double>>& rows) {
  return SimilarityMatrix::cross(Matrix::from_rows(rows));
}

SimilarityMatrix Q(const std::vector<std::vector<double>>& rows) {
  return SimilarityMatrix::within(Matrix::from_rows(rows));
}

ProjectionMatrix P(const std::vector<std::vector<double>>& rows) {
  return ProjectionMatrix{Matrix::from_rows(rows), ProjectionStage::kRaw, false};
}

SimilarityMatrix random_s(std::mt19937_64& rng, std::size_t max_dim = 5) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_real_distribution<double> cell(0.0, 1.0);
  std::bernoulli_distribution zero(0.2);
  Matrix m(dim(rng), dim(rng));
  for (double& v : m.cells) v = zero(rng) ? 0.0 : cell(rng);
  return SimilarityMatrix::cross(std::move(m));
}

Topic topic_of(const SparseVector& terms) { return Topic::from_terms(terms); }

}  // namespace

TEST(Cosine, Examples) {
  const SparseVector u{{"a", 1.0}, {"b", 1.0}};
  const SparseVector v{{"b", 1.0}, {"c", 1.0}};
  EXPECT_DOUBLE_EQ(cosine_similarity(u, u), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(u, SparseVector{{"x", 2.0}}), 0.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(u, v), 0.5);
  EXPECT_DOUBLE_EQ(cosine_similarity(u, SparseVector{}), 0.0);
  EXPECT_THROW(cosine_similarity(SparseVector{}, SparseVector{}), InvalidArgument);
}

TEST(Cosine, OrderOfEntriesDoesNotMatter) {
  const SparseVector u{{"b", 0.2}, {"a", 0.5}, {"c", 0.3}};
  const SparseVector v{{"c", 0.1}, {"a", 0.4}, {"d", 0.5}};
  const double expected = (0.5 * 0.4 + 0.3 * 0.1) / (std::sqrt(0.38) * std::sqrt(0.42));
  EXPECT_NEAR(cosine_similarity(u, v), expected, 1e-15);
}

TEST(CrossSimilarity, Examples) {
  const std::vector<Topic> two{topic_of({{"a", 0.6}, {"b", 0.4}}), topic_of({{"c", 0.7}, {"d", 0.3}})};
  const SimilarityMatrix self = cross_window_similarity(two, two);
  EXPECT_NEAR(self(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(self(1, 1), 1.0, 1e-15);
  EXPECT_EQ(self(0, 1), 0.0);

  const std::vector<Topic> three{topic_of({{"a", 1.0}}), topic_of({{"b", 1.0}}), topic_of({{"e", 1.0}})};
  const SimilarityMatrix shape = cross_window_similarity(two, three);
  EXPECT_EQ(shape.rows(), 2u);
  EXPECT_EQ(shape.cols(), 3u);

  const std::vector<Topic> other{topic_of({{"x", 0.5}, {"y", 0.5}}), topic_of({{"z", 1.0}})};
  const SimilarityMatrix disjoint = cross_window_similarity(two, other);
  for (double v : disjoint.values.cells) EXPECT_EQ(v, 0.0);
}

TEST(CrossSimilarity, UsesOnlyTopKTerms) {
  const std::vector<Topic> a{topic_of({{"a", 0.5}, {"b", 0.3}, {"z", 0.2}})};
  const std::vector<Topic> b{topic_of({{"z", 0.6}, {"a", 0.4}})};
  const SimilarityMatrix full = cross_window_similarity(a, b, 100);
  const SimilarityMatrix top1 = cross_window_similarity(a, b, 1);
  EXPECT_GT(full(0, 0), 0.0);
  EXPECT_EQ(top1(0, 0), 0.0);
  const double expected = cosine_similarity(topic_vector(a[0], 2), topic_vector(b[0], 2));
  EXPECT_NEAR(cross_window_similarity(a, b, 2)(0, 0), expected, 1e-15);
}

TEST(WithinSimilarity, Examples) {
  const std::vector<Topic> one{topic_of({{"a", 1.0}})};
  const SimilarityMatrix single = within_window_similarity(one);
  ASSERT_EQ(single.rows(), 1u);
  EXPECT_EQ(single(0, 0), 1.0);

  const std::vector<Topic> two{topic_of({{"a", 0.6}, {"b", 0.4}}), topic_of({{"c", 0.7}, {"d", 0.3}})};
  const SimilarityMatrix q = within_window_similarity(two);
  EXPECT_EQ(q.values, Matrix::from_rows({{1, 0}, {0, 1}}));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> w(0.01, 1.0);
  std::vector<Topic> many;
  for (int t = 0; t < 6; ++t) {
    SparseVector v;
    for (const char* term : {"a", "b", "c", "d", "e", "f", "g"}) {
      if (w(rng) < 0.6) v.push_back({term, w(rng)});
    }
    if (v.empty()) v.push_back({"a", 1.0});
    many.push_back(topic_of(v));
  }
  const SimilarityMatrix sym = within_window_similarity(many);
  for (std::size_t i = 0; i < sym.rows(); ++i) {
    EXPECT_EQ(sym(i, i), 1.0);
    for (std::size_t j = 0; j < sym.cols(); ++j) EXPECT_EQ(sym(i, j), sym(j, i));
  }
}

TEST(SimilarityMatrix, RejectsOutOfRangeCells) {
  EXPECT_THROW(S({{1.5}}), InvalidArgument);
  EXPECT_THROW(S({{-0.1}}), InvalidArgument);
  EXPECT_THROW(Q({{1, 0.2}}), InvalidArgument);
}

TEST(Projection, MergingExamples) {
  EXPECT_EQ(project_merging(S({{1, 0}, {1, 0}})).values, Matrix::from_rows({{1, 1}, {1, 1}}));
  EXPECT_EQ(project_merging(S({{1, 0}, {0, 1}})).values, Matrix::from_rows({{1, 0}, {0, 1}}));
  EXPECT_EQ(project_merging(S({{0, 0, 0}, {0, 0, 0}})).values, Matrix(2, 2));
  EXPECT_EQ(project_merging(S({{0.2, 0.4, 0.1}})).dim(), 1u);
}

TEST(Projection, SplittingExamples) {
  EXPECT_EQ(project_splitting(S({{1, 1}, {0, 0}})).values, Matrix::from_rows({{1, 1}, {1, 1}}));
  EXPECT_EQ(project_splitting(S({{1, 0}, {0, 1}})).values, Matrix::from_rows({{1, 0}, {0, 1}}));
  const ProjectionMatrix one = project_splitting(S({{0.3}, {0.8}}));
  EXPECT_EQ(one.dim(), 1u);
  EXPECT_EQ(splitting_index(normalize_triangle(one)), 0.0);
}

TEST(Projection, SymmetryDualityAndBruteForce) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const SimilarityMatrix s = random_s(rng);
    const ProjectionMatrix pm = project_merging(s);
    const ProjectionMatrix ps = project_splitting(s);
    EXPECT_EQ(ps.values, project_merging(SimilarityMatrix::cross(s.values.transposed())).values);
    for (std::size_t i = 0; i < s.rows(); ++i) {
      for (std::size_t k = 0; k < s.rows(); ++k) {
        double expected = 0.0;
        for (std::size_t j = 0; j < s.cols(); ++j) expected += s(i, j) * s(k, j);
        ASSERT_NEAR(pm(i, k), expected, 1e-12);
        ASSERT_NEAR(pm(i, k), pm(k, i), 1e-12);
      }
    }
    for (std::size_t a = 0; a < s.cols(); ++a) {
      for (std::size_t b = 0; b < s.cols(); ++b) {
        double expected = 0.0;
        for (std::size_t i = 0; i < s.rows(); ++i) expected += s(i, a) * s(i, b);
        ASSERT_NEAR(ps(a, b), expected, 1e-12);
        ASSERT_NEAR(ps(a, b), ps(b, a), 1e-12);
      }
    }
  }
}

TEST(Correction, Examples) {
  const ProjectionMatrix p = P({{2, 1}, {1, 2}});
  const SimilarityMatrix ones = Q({{1, 1}, {1, 1}});
  EXPECT_EQ(conditional_correct(p, ones).values, p.values);

  const SimilarityMatrix q = Q({{1, 0.5}, {0.5, 1}});
  const ProjectionMatrix same = P({{1, 0.5}, {0.5, 1}});
  EXPECT_EQ(conditional_correct(same, q).values, Matrix::from_rows({{1, 1}, {1, 1}}));
  EXPECT_EQ(conditional_correct(p, q).values, Matrix::from_rows({{2, 2}, {2, 2}}));
  EXPECT_EQ(conditional_correct(p, q).stage, ProjectionStage::kCorrected);
}

TEST(Correction, Modes) {
  const ProjectionMatrix p = P({{2, 1}, {1, 2}});
  const SimilarityMatrix q = Q({{1, 0.5}, {0.5, 1}});
  EXPECT_EQ(conditional_correct(p, q, {.mode = CorrectionMode::kNone}).values, p.values);
  // Q Q^T = [[1.25, 1], [1, 1.25]]
  const Matrix squared = conditional_correct(p, q, {.mode = CorrectionMode::kDivideQSquared}).values;
  EXPECT_DOUBLE_EQ(squared(0, 0), 2 / 1.25);
  EXPECT_DOUBLE_EQ(squared(0, 1), 1.0);
  const Matrix swapped =
      conditional_correct(p, q, {.mode = CorrectionMode::kDivideQSquared, .swap_operands = true}).values;
  EXPECT_DOUBLE_EQ(swapped(0, 0), 1.25 / 2);
  EXPECT_DOUBLE_EQ(swapped(1, 0), 1.0);
}

TEST(Correction, ZeroDenominatorIsFloored) {
  const ProjectionMatrix p = P({{1, 2e-9}, {2e-9, 1}});
  const Matrix r = conditional_correct(p, Q({{1, 0}, {0, 1}})).values;
  EXPECT_DOUBLE_EQ(r(0, 1), 2.0);
  EXPECT_TRUE(std::isfinite(r(1, 0)));
}

TEST(Correction, DimensionMismatchIsFatal) {
  EXPECT_THROW(conditional_correct(P({{1}}), Q({{1, 0}, {0, 1}})), InvalidArgument);
}

TEST(CorrectionMode, ParseRoundTrip) {
  for (CorrectionMode m : {CorrectionMode::kNone, CorrectionMode::kDivideRawQ, CorrectionMode::kDivideQSquared}) {
    EXPECT_EQ(parse_correction_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_correction_mode("subtract"), InvalidArgument);
  EXPECT_EQ(CorrectionOptions{}.mode, CorrectionMode::kDivideRawQ);
  EXPECT_EQ(CorrectionOptions{}.epsilon, 1e-9);
}

TEST(Normalize, Examples) {
  const ProjectionMatrix n = normalize_triangle(P({{1, 1}, {1, 1}}));
  EXPECT_EQ(n.stage, ProjectionStage::kNormalized);
  EXPECT_FALSE(n.zero_mass);
  EXPECT_NEAR(n(0, 0) + n(1, 0) + n(1, 1), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(n(0, 0), 1.0 / 3);

  const ProjectionMatrix z = normalize_triangle(P({{0, 0}, {0, 0}}));
  EXPECT_TRUE(z.zero_mass);
  EXPECT_EQ(z.values, Matrix(2, 2));
  EXPECT_EQ(merging_index(z), 0.0);

  const ProjectionMatrix id = normalize_triangle(P({{1, 0}, {0, 1}}));
  EXPECT_EQ(id(0, 0), 0.5);
  EXPECT_EQ(id(1, 1), 0.5);
}

TEST(Indexes, MergingAndSplittingExamples) {
  EXPECT_EQ(merging_index(normalize_triangle(P({{1, 1}, {1, 1}}))), 1.0 / 3);
  EXPECT_EQ(merging_index(normalize_triangle(P({{3, 0}, {0, 1}}))), 0.0);
  EXPECT_EQ(merging_index(normalize_triangle(project_merging(S({{0.4, 0.9}})))), 0.0);
  EXPECT_EQ(splitting_index(normalize_triangle(project_splitting(S({{0.4}, {0.9}})))), 0.0);
  EXPECT_EQ(splitting_index(normalize_triangle(project_splitting(S({{1, 0}, {0, 1}})))), 0.0);
  EXPECT_EQ(splitting_index(normalize_triangle(project_splitting(S({{1, 1}, {0, 0}})))), 1.0 / 3);
  EXPECT_EQ(merging_index(normalize_triangle(project_merging(S({{1, 0}, {1, 0}})))), 1.0 / 3);
  EXPECT_THROW(merging_index(P({{1}})), InvalidArgument);
}

TEST(Novelty, Examples) {
  EXPECT_EQ(novelty_per_topic(S({{0}, {0}})), std::vector<double>{1.0});
  EXPECT_EQ(novelty_per_topic(S({{1}, {1}})), std::vector<double>{0.0});
  EXPECT_NEAR(novelty_per_topic(S({{0.2}, {0.4}}))[0], 0.7, 1e-15);
  EXPECT_EQ(novelty_index(S({{0, 0}, {0, 0}})), 1.0);
  EXPECT_EQ(novelty_index(S({{1, 1}, {1, 1}})), 0.0);
  EXPECT_NEAR(novelty_index(S({{0.5, 0.1}, {0.3, 0.1}})), 0.75, 1e-15);
}

TEST(Novelty, MonotoneInEveryCell) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    SimilarityMatrix s = random_s(rng);
    const double before = novelty_index(s);
    const std::size_t cell = static_cast<std::size_t>(u(rng) * static_cast<double>(s.values.cells.size()));
    Matrix raised = s.values;
    raised.cells[cell] = raised.cells[cell] + (1.0 - raised.cells[cell]) * u(rng);
    EXPECT_LE(novelty_index(SimilarityMatrix::cross(raised)), before);
  }
}

TEST(BirthsDeaths, Examples) {
  EXPECT_EQ(count_births_deaths(S({{0, 0, 0}, {0, 0, 0}})), (BirthsDeaths{3, 2}));
  EXPECT_EQ(count_births_deaths(S({{1, 0}, {0, 1}})), (BirthsDeaths{0, 0}));
  EXPECT_EQ(count_births_deaths(S({{0, 0.6}, {0, 0}})), (BirthsDeaths{1, 1}));
  EXPECT_EQ(count_births_deaths(S({{0.04, 0.6}, {0.05, 0.01}}), 0.05), (BirthsDeaths{1, 1}));
  EXPECT_THROW(count_births_deaths(S({{0}}), -0.1), InvalidArgument);
}

TEST(Transitions, MergingBirthDeath) {
  const auto t = classify_transitions(S({{0.9, 0}, {0.9, 0}, {0, 0}}), 0.5);
  const std::vector<Transition> expected{
      {0, 0, 0.9, TransitionLabel::kMerging},
      {1, 0, 0.9, TransitionLabel::kMerging},
      {-1, 1, 0.0, TransitionLabel::kBirth},
      {2, -1, 0.0, TransitionLabel::kDeath},
  };
  EXPECT_EQ(t, expected);
}

TEST(Transitions, StabilityAndSplitting) {
  for (const Transition& tr : classify_transitions(S({{1, 0}, {0, 1}}), 0.5)) {
    EXPECT_EQ(tr.label, TransitionLabel::kStability);
  }
  const auto split = classify_transitions(S({{0.9, 0.9}}), 0.5);
  ASSERT_EQ(split.size(), 2u);
  for (const Transition& tr : split) {
    EXPECT_EQ(tr.label, TransitionLabel::kSplitting);
    EXPECT_EQ(tr.from, 0);
  }
  const auto both = classify_transitions(S({{0.9, 0.9}, {0.9, 0}}), 0.5);
  EXPECT_EQ(both.front().label, TransitionLabel::kMergingSplitting);
  EXPECT_THROW(classify_transitions(S({{0.5}}), 1.0), InvalidArgument);
}

TEST(Transitions, AgreeWithBirthDeathCounts) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> tau_pick(0.0, 0.9);
  for (int trial = 0; trial < 1000; ++trial) {
    const SimilarityMatrix s = random_s(rng);
    const double tau = trial % 3 == 0 ? 0.0 : tau_pick(rng);
    const BirthsDeaths bd = count_births_deaths(s, tau);
    int births = 0, deaths = 0;
    for (const Transition& t : classify_transitions(s, tau)) {
      births += t.label == TransitionLabel::kBirth;
      deaths += t.label == TransitionLabel::kDeath;
    }
    EXPECT_EQ(births, bd.births);
    EXPECT_EQ(deaths, bd.deaths);
  }
}

TEST(BiAdjacency, Examples) {
  EXPECT_EQ(build_bi_adjacency(S({{0.4}})), Matrix::from_rows({{0, 0.4}, {0.4, 0}}));
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const SimilarityMatrix s = random_s(rng);
    const Matrix d = build_bi_adjacency(s);
    const std::size_t m = s.rows();
    ASSERT_EQ(d.rows, m + s.cols());
    EXPECT_EQ(d, d.transposed());
    for (std::size_t i = 0; i < d.rows; ++i) {
      for (std::size_t j = 0; j < d.cols; ++j) {
        if ((i < m) == (j < m)) {
          EXPECT_EQ(d(i, j), 0.0);
        }
      }
    }
  }
}

TEST(IndexProperties, IdentitiesAndRanges) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> mode_pick(0, 3);
  for (int trial = 0; trial < 10000; ++trial) {
    const SimilarityMatrix s = random_s(rng, 6);
    const auto per_topic = novelty_per_topic(s);
    double mean = 0.0;
    for (double v : per_topic) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
      mean += v;
    }
    mean /= static_cast<double>(per_topic.size());
    const double ni = novelty_index(s);
    ASSERT_NEAR(ni, mean, 1e-12);
    ASSERT_GE(ni, 0.0);
    ASSERT_LE(ni, 1.0);

    CorrectionOptions opts;
    switch (mode_pick(rng)) {
      case 0: opts.mode = CorrectionMode::kNone; break;
      case 1: opts.mode = CorrectionMode::kDivideRawQ; break;
      case 2: opts.mode = CorrectionMode::kDivideQSquared; break;
      default: opts.mode = CorrectionMode::kDivideQSquared; opts.swap_operands = true; break;
    }
    auto random_q = [&](std::size_t n) {
      Matrix q(n, n);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        q(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) q(i, j) = q(j, i) = u(rng) < 0.3 ? 0.0 : u(rng);
      }
      return SimilarityMatrix::within(q);
    };
    const double mi = merging_index(normalize_triangle(conditional_correct(project_merging(s), random_q(s.rows()), opts)));
    const double si = splitting_index(normalize_triangle(conditional_correct(project_splitting(s), random_q(s.cols()), opts)));
    ASSERT_GE(mi, 0.0);
    ASSERT_LE(mi, 1.0);
    ASSERT_GE(si, 0.0);
    ASSERT_LE(si, 1.0);
    if (s.rows() == 1) {
      ASSERT_EQ(mi, 0.0);
    }
    if (s.cols() == 1) {
      ASSERT_EQ(si, 0.0);
    }
  }
}

namespace {

std::vector<Document> pool_docs(char pool, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Document> docs;
  for (int d = 0; d < count; ++d) {
    Bag bag;
    for (int t = 0; t < 60; ++t) {
      const int term = static_cast<int>(rng() % 12);
      ++bag[std::string(1, pool) + "term" + std::string(1, static_cast<char>('a' + term))];
    }
    docs.push_back(testutil::make_doc(std::string(1, pool) + std::to_string(d), 2000, bag));
  }
  return docs;
}

std::vector<const Document*> ptrs(const std::vector<Document>& docs) {
  std::vector<const Document*> out;
  for (const auto& d : docs) out.push_back(&d);
  return out;
}

}  // namespace

TEST(WindowPair, DisjointVocabulariesGiveFullTurnover) {
  const auto a = pool_docs('x', 12, 1), b = pool_docs('y', 12, 2);
  LdaConfig c{.num_topics = 3, .iterations = 50, .seed = 5};
  const TopicModel ma = train_lda(ptrs(a), c, {1900, 1910, "1900-1910"});
  const TopicModel mb = train_lda(ptrs(b), c, {1910, 1920, "1910-1920"});
  const WindowPairReport r = compute_window_pair(ma, mb);
  EXPECT_EQ(r.novelty_index, 1.0);
  EXPECT_EQ(r.births, 3);
  EXPECT_EQ(r.deaths, 3);
  EXPECT_EQ(r.label(), "1900-1920");
  EXPECT_EQ(r.similarity.row_labels.front(), "1900-1910:0");
  EXPECT_TRUE(r.merging_zero_mass);
  EXPECT_EQ(r.merging_index, 0.0);
}

TEST(WindowPair, SelfComparisonIsLessNovelThanTurnover) {
  const auto a = pool_docs('x', 12, 1), b = pool_docs('y', 12, 2);
  LdaConfig c{.num_topics = 2, .iterations = 100, .seed = 5};
  const TopicModel ma = train_lda(ptrs(a), c);
  const WindowPairReport self = compute_window_pair(ma, ma, {.tau = 0.1});
  const WindowPairReport turnover = compute_window_pair(ma, train_lda(ptrs(b), c), {.tau = 0.1});
  EXPECT_LT(self.novelty_index, turnover.novelty_index);
  EXPECT_EQ(self.births, 0);
  EXPECT_EQ(self.deaths, 0);
  for (double v : {self.merging_index, self.splitting_index, self.novelty_index}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(WindowPair, MergingDesignForcesZeroSplitting) {
  const auto a = pool_docs('x', 6, 1), b = pool_docs('y', 6, 2);
  std::vector<Document> both = a;
  both.insert(both.end(), b.begin(), b.end());
  const TopicModel two = train_lda(ptrs(both), {.num_topics = 2, .iterations = 50, .seed = 1});
  const TopicModel one = train_lda(ptrs(both), {.num_topics = 1, .iterations = 50, .seed = 2});
  EXPECT_EQ(compute_window_pair(two, one).splitting_index, 0.0);
  EXPECT_EQ(compute_window_pair(one, two).merging_index, 0.0);
}

TEST(WindowPair, TrainsFromWindows) {
  Corpus corpus;
  for (auto& d : pool_docs('x', 12, 1)) corpus.documents.push_back(d), corpus.documents.back().year = 1901;
  for (auto& d : pool_docs('x', 12, 3)) corpus.documents.push_back(d), corpus.documents.back().year = 1911;
  corpus.rebuild_vocabulary();
  const auto windows = slice_windows(corpus, 1900, 1920, 10);
  LdaConfig c{.num_topics = 2, .iterations = 30, .seed = 1};
  const WindowPairReport r = compute_window_pair(windows[0], windows[1], c, c);
  EXPECT_EQ(r.from.start, 1900);
  EXPECT_EQ(r.to.end, 1920);
  EXPECT_EQ(r.similarity.rows(), 2u);
}
