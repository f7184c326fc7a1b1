#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace topicdyn {

using StopwordSet = std::unordered_set<std::string>;
using Bag = std::map<std::string, std::int64_t>;

/// Porter (1980) stemmer, following the reference ANSI C release
/// (including its "logi" and "bli" departures from the published rules).
/// Words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

/// The English stopword list shipped with the library.
const StopwordSet& default_stopwords();

/// Reads one term per line; blank lines and leading/trailing whitespace are
/// ignored. Terms are lowercased.
StopwordSet load_stopwords(const std::string& path);

/// Splits text into maximal runs of word characters ([A-Za-z0-9_] plus any
/// non-ASCII byte) and lowercases ASCII letters.
std::vector<std::string> tokenize(std::string_view text);

/// True when the token consists only of ASCII letters.
bool is_alphabetic(std::string_view token);

struct PreprocessOptions {
  // Synthetic-corpus path: drop tokens that contain digits, as an
  // approximation of part-of-speech filtering of numerals.
  bool drop_numeric = false;
};

/// Lowercase, tokenize, drop stopwords, Porter-stem alphabetic survivors.
/// Multiplicity is preserved.
Bag preprocess(std::string_view raw_text, const StopwordSet& stopwords,
               const PreprocessOptions& options = {});

/// Same filter chain applied to an already-counted bag of words.
Bag normalize_bag(const Bag& counts, const StopwordSet& stopwords,
                  const PreprocessOptions& options = {});

}  // namespace topicdyn
