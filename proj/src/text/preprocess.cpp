#include <algorithm>
#include <fstream>
#include <sstream>

#include "topicdyn/error.hpp"
#include "topicdyn/text.hpp"

namespace topicdyn {
namespace detail {
extern const std::string_view kEnglishStopwords;
}  // namespace detail

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c >= 0x80;
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

StopwordSet parse_stopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    std::string term = trim(line);
    if (term.empty()) continue;
    std::transform(term.begin(), term.end(), term.begin(), ascii_lower);
    words.insert(std::move(term));
  }
  return words;
}

bool has_digit(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Applies the filter chain to one lowercase word token. Returns an empty
// string when the token is dropped.
std::string filter_token(std::string_view token, const StopwordSet& stopwords,
                         const PreprocessOptions& options) {
  if (token.empty()) return {};
  if (stopwords.count(std::string(token)) != 0) return {};
  if (options.drop_numeric && has_digit(token)) return {};
  if (is_alphabetic(token)) return porter_stem(token);
  return std::string(token);
}

}  // namespace

const StopwordSet& default_stopwords() {
  static const StopwordSet words = [] {
    std::istringstream in{std::string(detail::kEnglishStopwords)};
    return parse_stopwords(in);
  }();
  return words;
}

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read stopword file: " + path);
  return parse_stopwords(in);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : text) {
    if (is_word_byte(static_cast<unsigned char>(ch))) {
      current.push_back(ascii_lower(ch));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool is_alphabetic(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

Bag preprocess(std::string_view raw_text, const StopwordSet& stopwords,
               const PreprocessOptions& options) {
  Bag bag;
  for (const std::string& token : tokenize(raw_text)) {
    std::string term = filter_token(token, stopwords, options);
    if (!term.empty()) ++bag[term];
  }
  return bag;
}

Bag normalize_bag(const Bag& counts, const StopwordSet& stopwords,
                  const PreprocessOptions& options) {
  Bag bag;
  for (const auto& [raw, count] : counts) {
    if (count <= 0) continue;
    // A bag key may still hold several words ("new-york"); each piece
    // inherits the key's count.
    for (const std::string& token : tokenize(raw)) {
      std::string term = filter_token(token, stopwords, options);
      if (!term.empty()) bag[term] += count;
    }
  }
  return bag;
}

}  // namespace topicdyn
