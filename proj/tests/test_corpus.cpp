#include <algorithm>
#include <filesystem>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "topicdyn/corpus.hpp"
#include "topicdyn/error.hpp"

using namespace topicdyn;
using testutil::TempDir;
using testutil::write_file;

TEST(LoadCorpus, MinimalLine) {
  TempDir dir;
  write_file(dir.file("c.jsonl"), R"({"id":"d1","year":1950,"counts":{"market":3}})" "\n");
  const Corpus c = load_corpus(dir.file("c.jsonl"), CorpusFormat::kJsonlBag);
  ASSERT_EQ(c.documents.size(), 1u);
  EXPECT_EQ(c.vocabulary_size(), 1u);
  EXPECT_EQ(c.documents[0].counts.at("market"), 3);
  EXPECT_EQ(c.documents[0].year, 1950);
}

TEST(LoadCorpus, EmptyFileIsFatal) {
  TempDir dir;
  write_file(dir.file("c.jsonl"), "");
  try {
    load_corpus(dir.file("c.jsonl"), CorpusFormat::kJsonlBag);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("zero valid documents"), std::string::npos);
  }
}

TEST(LoadCorpus, MalformedLinesAreSkippedAndCounted) {
  TempDir dir;
  write_file(dir.file("c.jsonl"),
             R"({"id":"d1","year":1950,"counts":{"market":3}})" "\n"
             R"({"id":"d2","year":"soon","counts":{"price":1}})" "\n"
             R"({"id":"d3","year":1951,"counts":{"price":2,"market":1}})" "\n");
  const Corpus c = load_corpus(dir.file("c.jsonl"), CorpusFormat::kJsonlBag);
  EXPECT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.skipped, 1u);
}

TEST(LoadCorpus, UnreadableFileIsIoError) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl", CorpusFormat::kJsonlBag), IoError);
}

TEST(LoadCorpus, VocabularyIsDenseAndCoversEveryTerm) {
  TempDir dir;
  write_file(dir.file("c.jsonl"),
             R"({"id":"a","year":1900,"counts":{"zeta":1,"alpha":2}})" "\n"
             R"({"id":"b","year":1901,"counts":{"mid":1,"alpha":1}})" "\n");
  const Corpus c = load_corpus(dir.file("c.jsonl"), CorpusFormat::kJsonlBag, {.normalize_bags = false});
  ASSERT_EQ(c.vocabulary_size(), 3u);
  std::vector<bool> seen(3, false);
  for (const auto& [term, id] : c.vocabulary) seen.at(static_cast<std::size_t>(id)) = true;
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
  for (const Document& d : c.documents) {
    for (const auto& [term, n] : d.counts) {
      EXPECT_EQ(c.vocabulary.count(term), 1u);
      EXPECT_GE(n, 1);
    }
  }
  EXPECT_EQ(c.vocabulary.at("alpha"), 0);
  EXPECT_EQ(c.vocabulary.at("zeta"), 2);
}

TEST(LoadCorpus, BagsGoThroughStopwordsAndStemming) {
  TempDir dir;
  write_file(dir.file("c.jsonl"), R"({"id":"a","year":1900,"counts":{"markets":2,"market":1,"the":9}})" "\n");
  const Corpus c = load_corpus(dir.file("c.jsonl"), CorpusFormat::kJsonlBag);
  EXPECT_EQ(c.documents[0].counts, (Bag{{"market", 3}}));
}

TEST(LoadCorpus, KindFilterKeepsUnlabelledDocuments) {
  TempDir dir;
  write_file(dir.file("c.jsonl"),
             R"({"id":"a","year":1900,"counts":{"price":1},"kind":"research-article"})" "\n"
             R"({"id":"b","year":1900,"counts":{"price":1},"kind":"other"})" "\n"
             R"({"id":"c","year":1900,"counts":{"price":1}})" "\n");
  const Corpus c = load_corpus(dir.file("c.jsonl"), CorpusFormat::kJsonlBag,
                               {.kind_filter = DocumentKind::kResearchArticle});
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[0].id, "a");
  EXPECT_EQ(c.documents[1].id, "c");
}

TEST(LoadCorpus, PlainTextDirectory) {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "docs");
  write_file((dir.path() / "docs" / "alpha_1950.txt").string(), "The markets clear.");
  write_file((dir.path() / "docs" / "beta_doc_1951.txt").string(), "Prices and markets");
  write_file((dir.path() / "docs" / "noyear.txt").string(), "ignored");
  const Corpus c = load_corpus((dir.path() / "docs").string(), CorpusFormat::kPlainTextDir);
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.skipped, 1u);
  EXPECT_EQ(c.documents[0].id, "alpha");
  EXPECT_EQ(c.documents[0].year, 1950);
  EXPECT_EQ(c.documents[1].id, "beta_doc");
  EXPECT_EQ(c.documents[1].counts, (Bag{{"market", 1}, {"price", 1}}));
}

TEST(LoadCorpus, SaveRoundTrip) {
  TempDir dir;
  Corpus c;
  c.documents.push_back(testutil::make_doc("x", 1990, {{"price", 2}, {"trade", 1}}));
  c.documents.back().kind = DocumentKind::kOther;
  c.documents.push_back(testutil::make_doc("y", 1991, {{"wage", 4}}));
  c.rebuild_vocabulary();
  save_corpus_jsonl(c, dir.file("c.jsonl"));
  const Corpus back = load_corpus(dir.file("c.jsonl"), CorpusFormat::kJsonlBag, {.normalize_bags = false});
  ASSERT_EQ(back.documents.size(), 2u);
  EXPECT_EQ(back.documents[0].counts, c.documents[0].counts);
  EXPECT_EQ(back.documents[0].kind, DocumentKind::kOther);
  EXPECT_FALSE(back.documents[1].kind.has_value());
  EXPECT_EQ(back.vocabulary, c.vocabulary);
}

namespace {

Corpus years_corpus(const std::vector<int>& years) {
  Corpus c;
  int i = 0;
  for (int y : years) c.documents.push_back(testutil::make_doc("d" + std::to_string(i++), y, {{"term", 1}}));
  c.rebuild_vocabulary();
  return c;
}

}  // namespace

TEST(SliceWindows, DecadesOver1890To2010) {
  const Corpus c = years_corpus({1890, 1955, 2009});
  const auto w = slice_windows(c, 1890, 2010, 10);
  ASSERT_EQ(w.size(), 12u);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_EQ(w[i].start, 1890 + 10 * static_cast<int>(i));
    EXPECT_EQ(w[i].end, w[i].start + 10);
    EXPECT_EQ(w[i].index, i);
    EXPECT_FALSE(w[i].truncated);
  }
  EXPECT_EQ(w[0].label(), "1890-1900");
}

TEST(SliceWindows, AllDocumentsInOneYear) {
  const Corpus c = years_corpus(std::vector<int>(12, 1895));
  const auto w = slice_windows(c, 1890, 1930, 10);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w[0].documents.size(), 12u);
  EXPECT_TRUE(w[0].usable);
  for (std::size_t i = 1; i < w.size(); ++i) {
    EXPECT_TRUE(w[i].documents.empty());
    EXPECT_FALSE(w[i].usable);
  }
}

TEST(SliceWindows, TruncatedFinalWindow) {
  const Corpus c = years_corpus({1890, 2012});
  const auto w = slice_windows(c, 1890, 2013, 10);
  ASSERT_EQ(w.size(), 13u);
  EXPECT_EQ(w.back().start, 2010);
  EXPECT_EQ(w.back().end, 2013);
  EXPECT_TRUE(w.back().truncated);
  EXPECT_FALSE(w[11].truncated);
}

TEST(SliceWindows, PartitionProperty) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> year(1850, 2020);
  std::vector<int> years;
  for (int i = 0; i < 500; ++i) years.push_back(year(rng));
  const Corpus c = years_corpus(years);
  for (int width : {1, 3, 7, 10, 25}) {
    const auto windows = slice_windows(c, 1890, 2013, width);
    std::map<const Document*, int> hits;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (i > 0) {
        EXPECT_EQ(windows[i].start, windows[i - 1].end);
      }
      for (const Document* d : windows[i].documents) {
        EXPECT_GE(d->year, windows[i].start);
        EXPECT_LT(d->year, windows[i].end);
        ++hits[d];
      }
    }
    for (const Document& d : c.documents) {
      const int expected = (d.year >= 1890 && d.year < 2013) ? 1 : 0;
      EXPECT_EQ(hits.count(&d) ? hits[&d] : 0, expected);
    }
  }
}

TEST(SliceWindows, MinimumDocumentsIsConfigurable) {
  const Corpus c = years_corpus({1900, 1901, 1902, 1915});
  const auto strict = slice_windows(c, 1900, 1920, 10);
  EXPECT_FALSE(strict[0].usable);
  const auto loose = slice_windows(c, 1900, 1920, 10, {.min_documents = 3});
  EXPECT_TRUE(loose[0].usable);
  EXPECT_FALSE(loose[1].usable);
}

TEST(SliceWindows, RejectsBadArguments) {
  const Corpus c = years_corpus({1900});
  EXPECT_THROW(slice_windows(c, 1900, 1950, 0), InvalidArgument);
  EXPECT_THROW(slice_windows(c, 1950, 1950, 10), InvalidArgument);
}
