#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topicdyn/text.hpp"

namespace topicdyn {

enum class DocumentKind { kResearchArticle, kOther };

struct Document {
  std::string id;
  int year = 0;
  Bag counts;  // term -> frequency, every frequency >= 1
  std::optional<DocumentKind> kind;

  std::int64_t total_tokens() const;
};

struct Corpus {
  std::vector<Document> documents;
  std::map<std::string, std::int32_t> vocabulary;  // dense ids 0..V-1
  std::size_t skipped = 0;  // malformed or rejected inputs

  std::size_t vocabulary_size() const { return vocabulary.size(); }
  /// Rebuilds `vocabulary` from the documents, ids in lexicographic order.
  void rebuild_vocabulary();
};

enum class CorpusFormat { kJsonlBag, kPlainTextDir };

struct LoadOptions {
  int min_year = -100000;
  int max_year = 100000;
  // Run the stopword/stem chain over pre-counted bags as well as raw text.
  bool normalize_bags = true;
  // When set, documents carrying a `kind` field are kept only if it matches.
  // Documents without the field are always kept.
  std::optional<DocumentKind> kind_filter;
  const StopwordSet* stopwords = nullptr;  // nullptr selects the default list
};

/// jsonl-bag: one object per line {"id": str, "year": int, "counts": {term: int},
/// "kind": optional str}. plain-text-dir: files named `<id>_<year>.txt`.
/// Throws IoError when the input cannot be read and FormatError when no
/// document survives.
Corpus load_corpus(const std::string& path, CorpusFormat format, const LoadOptions& options = {});

/// Writes the jsonl-bag format.
void save_corpus_jsonl(const Corpus& corpus, const std::string& path);

std::optional<DocumentKind> parse_document_kind(const std::string& text);
std::string to_string(DocumentKind kind);

/// Half-open year range [start, end) over a subset of a corpus. Documents are
/// borrowed from the owning Corpus, which must outlive the window.
struct TimeWindow {
  int start = 0;
  int end = 0;
  std::vector<const Document*> documents;
  bool truncated = false;  // narrower than the configured width
  bool usable = true;      // holds at least the configured minimum of documents
  std::size_t index = 0;   // position in the slicing

  std::string label() const;  // "1900-1910"
};

struct SliceOptions {
  std::size_t min_documents = 10;
};

/// Adjacent windows [start, start+width), ... covering [start_year, end_year).
std::vector<TimeWindow> slice_windows(const Corpus& corpus, int start_year, int end_year, int width,
                                      const SliceOptions& options = {});

}  // namespace topicdyn
