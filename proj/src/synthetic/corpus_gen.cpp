#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "topicdyn/error.hpp"
#include "topicdyn/synthetic.hpp"
#include "topicdyn/text.hpp"

namespace topicdyn {

namespace {

// Pronounceable pseudo-words that survive the preprocessing chain unchanged,
// so the generated bags need no normalization.
class WordFactory {
 public:
  explicit WordFactory(std::uint64_t seed) : rng_(seed) {}

  std::string next() {
    static constexpr std::string_view kConsonants = "bcdfghjklmnprstvz";
    static constexpr std::string_view kVowels = "aeiou";
    std::uniform_int_distribution<std::size_t> cons(0, kConsonants.size() - 1);
    std::uniform_int_distribution<std::size_t> vow(0, kVowels.size() - 1);
    std::uniform_int_distribution<int> syllables(2, 3);
    for (;;) {
      std::string w;
      const int n = syllables(rng_);
      for (int i = 0; i < n; ++i) {
        w += kConsonants[cons(rng_)];
        w += kVowels[vow(rng_)];
      }
      w += kConsonants[cons(rng_)];
      if (used_.count(w) != 0) continue;
      if (default_stopwords().count(w) != 0) continue;
      if (porter_stem(w) != w) continue;
      used_.insert(w);
      return w;
    }
  }

 private:
  std::mt19937_64 rng_;
  std::unordered_set<std::string> used_;
};

struct Theme {
  std::vector<std::string> terms;
};

}  // namespace

Corpus generate_synthetic_corpus(const SyntheticCorpusOptions& options) {
  if (options.years < 1) throw InvalidArgument("synthetic corpus needs at least one year");
  if (options.num_documents == 0) throw InvalidArgument("synthetic corpus needs documents");
  if (options.active_themes == 0 || options.terms_per_theme == 0) {
    throw InvalidArgument("synthetic corpus needs themes with terms");
  }
  if (options.min_tokens < 1 || options.max_tokens < options.min_tokens) {
    throw InvalidArgument("synthetic document length range is empty");
  }
  if (options.drift_period < 1 || options.drift_fraction < 0.0 || options.drift_fraction > 1.0) {
    throw InvalidArgument("bad drift settings");
  }

  WordFactory words(options.seed ^ 0x5bd1e995ULL);
  auto new_theme = [&] {
    Theme t;
    for (std::size_t i = 0; i < options.terms_per_theme; ++i) t.terms.push_back(words.next());
    return t;
  };

  std::vector<double> zipf(options.terms_per_theme);
  for (std::size_t r = 0; r < zipf.size(); ++r) zipf[r] = 1.0 / static_cast<double>(r + 1);
  std::discrete_distribution<std::size_t> term_pick(zipf.begin(), zipf.end());

  std::vector<Theme> slots;
  for (std::size_t i = 0; i < options.active_themes; ++i) slots.push_back(new_theme());
  const auto drift_count = static_cast<std::size_t>(
      std::llround(options.drift_fraction * static_cast<double>(options.active_themes)));
  std::size_t drift_cursor = 0;

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> length(options.min_tokens, options.max_tokens);
  std::uniform_int_distribution<std::size_t> slot_pick(0, options.active_themes - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Corpus corpus;
  std::size_t doc_index = 0;
  for (int y = 0; y < options.years; ++y) {
    const int year = options.start_year + y;
    if (options.turnover_year && year == *options.turnover_year) {
      for (Theme& t : slots) t = new_theme();
    } else if (y > 0 && y % options.drift_period == 0) {
      for (std::size_t i = 0; i < drift_count; ++i) {
        slots[drift_cursor] = new_theme();
        drift_cursor = (drift_cursor + 1) % slots.size();
      }
    }
    // Even spread of documents over the years.
    const std::size_t until = options.num_documents * static_cast<std::size_t>(y + 1) /
                              static_cast<std::size_t>(options.years);
    for (; doc_index < until; ++doc_index) {
      Document doc;
      doc.id = "synth-" + std::to_string(doc_index);
      doc.year = year;
      doc.kind = unit(rng) < options.other_kind_fraction ? DocumentKind::kOther
                                                         : DocumentKind::kResearchArticle;
      const std::size_t main = slot_pick(rng);
      const std::size_t side = slot_pick(rng);
      const int n = length(rng);
      for (int i = 0; i < n; ++i) {
        const Theme& theme = slots[unit(rng) < 0.8 ? main : side];
        ++doc.counts[theme.terms[term_pick(rng)]];
      }
      corpus.documents.push_back(std::move(doc));
    }
  }
  corpus.rebuild_vocabulary();
  return corpus;
}

}  // namespace topicdyn
