#include "topicdyn/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "topicdyn/error.hpp"

namespace topicdyn {
namespace fs = std::filesystem;
using nlohmann::json;

std::int64_t Document::total_tokens() const {
  std::int64_t total = 0;
  for (const auto& [term, count] : counts) total += count;
  return total;
}

void Corpus::rebuild_vocabulary() {
  vocabulary.clear();
  for (const Document& doc : documents) {
    for (const auto& [term, count] : doc.counts) vocabulary.emplace(term, 0);
  }
  std::int32_t next = 0;
  for (auto& [term, id] : vocabulary) id = next++;
}

std::optional<DocumentKind> parse_document_kind(const std::string& text) {
  if (text == "research-article" || text == "research_article" || text == "article") {
    return DocumentKind::kResearchArticle;
  }
  if (text.empty()) return std::nullopt;
  return DocumentKind::kOther;
}

std::string to_string(DocumentKind kind) {
  return kind == DocumentKind::kResearchArticle ? "research-article" : "other";
}

namespace {

bool keep_document(const Document& doc, const LoadOptions& options) {
  if (doc.year < options.min_year || doc.year > options.max_year) return false;
  if (doc.counts.empty()) return false;
  if (options.kind_filter && doc.kind && *doc.kind != *options.kind_filter) return false;
  return true;
}

// Returns nullopt for a malformed line.
std::optional<Document> parse_jsonl_line(const std::string& line, const StopwordSet& stopwords,
                                         bool normalize) {
  json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!object.is_object()) return std::nullopt;
  const auto id = object.find("id");
  const auto year = object.find("year");
  const auto counts = object.find("counts");
  if (id == object.end() || !id->is_string()) return std::nullopt;
  if (year == object.end() || !year->is_number_integer()) return std::nullopt;
  if (counts == object.end() || !counts->is_object()) return std::nullopt;

  Document doc;
  doc.id = id->get<std::string>();
  doc.year = year->get<int>();
  Bag raw;
  for (const auto& [term, value] : counts->items()) {
    if (!value.is_number_integer() || value.get<std::int64_t>() < 1 || term.empty()) {
      return std::nullopt;
    }
    raw[term] += value.get<std::int64_t>();
  }
  doc.counts = normalize ? normalize_bag(raw, stopwords) : std::move(raw);
  if (const auto kind = object.find("kind"); kind != object.end() && kind->is_string()) {
    doc.kind = parse_document_kind(kind->get<std::string>());
  }
  return doc;
}

Corpus load_jsonl(const std::string& path, const LoadOptions& options,
                  const StopwordSet& stopwords) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read corpus file: " + path);
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::optional<Document> doc = parse_jsonl_line(line, stopwords, options.normalize_bags);
    if (!doc || !keep_document(*doc, options)) {
      ++corpus.skipped;
      continue;
    }
    corpus.documents.push_back(std::move(*doc));
  }
  return corpus;
}

Corpus load_text_dir(const std::string& path, const LoadOptions& options,
                     const StopwordSet& stopwords) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) throw IoError("not a readable directory: " + path);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  Corpus corpus;
  for (const fs::path& file : files) {
    const std::string stem = file.stem().string();
    const auto sep = stem.rfind('_');
    Document doc;
    try {
      if (sep == std::string::npos || sep == 0) throw std::invalid_argument("no year");
      std::size_t used = 0;
      doc.year = std::stoi(stem.substr(sep + 1), &used);
      if (used != stem.size() - sep - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      ++corpus.skipped;
      continue;
    }
    doc.id = stem.substr(0, sep);
    std::ifstream in(file);
    if (!in) throw IoError("cannot read document: " + file.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    doc.counts = preprocess(buffer.str(), stopwords);
    if (!keep_document(doc, options)) {
      ++corpus.skipped;
      continue;
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace

Corpus load_corpus(const std::string& path, CorpusFormat format, const LoadOptions& options) {
  const StopwordSet& stopwords = options.stopwords ? *options.stopwords : default_stopwords();
  Corpus corpus = format == CorpusFormat::kJsonlBag ? load_jsonl(path, options, stopwords)
                                                    : load_text_dir(path, options, stopwords);
  if (corpus.documents.empty()) throw FormatError("zero valid documents in " + path);
  if (corpus.skipped > 0) {
    std::clog << "warning: skipped " << corpus.skipped << " malformed or filtered document(s) in "
              << path << '\n';
  }
  corpus.rebuild_vocabulary();
  return corpus;
}

void save_corpus_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file: " + path);
  for (const Document& doc : corpus.documents) {
    json object;
    object["id"] = doc.id;
    object["year"] = doc.year;
    object["counts"] = json::object();
    for (const auto& [term, count] : doc.counts) object["counts"][term] = count;
    if (doc.kind) object["kind"] = to_string(*doc.kind);
    out << object.dump() << '\n';
  }
  if (!out) throw IoError("failed writing corpus file: " + path);
}

std::string TimeWindow::label() const {
  return std::to_string(start) + "-" + std::to_string(end);
}

std::vector<TimeWindow> slice_windows(const Corpus& corpus, int start_year, int end_year, int width,
                                      const SliceOptions& options) {
  if (width < 1) throw InvalidArgument("window width must be >= 1");
  if (start_year >= end_year) throw InvalidArgument("start year must precede end year");

  std::vector<TimeWindow> windows;
  for (int start = start_year; start < end_year; start += width) {
    TimeWindow window;
    window.start = start;
    window.end = std::min(start + width, end_year);
    window.truncated = window.end - window.start < width;
    window.index = windows.size();
    windows.push_back(std::move(window));
  }
  for (const Document& doc : corpus.documents) {
    if (doc.year < start_year || doc.year >= end_year) continue;
    const auto slot = static_cast<std::size_t>((doc.year - start_year) / width);
    windows[slot].documents.push_back(&doc);
  }
  for (TimeWindow& window : windows) {
    window.usable = window.documents.size() >= options.min_documents && !window.documents.empty();
  }
  return windows;
}

}  // namespace topicdyn
