#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topicdyn/corpus.hpp"
#include "topicdyn/dynamics.hpp"
#include "topicdyn/lda.hpp"
#include "topicdyn/mediawiki.hpp"

namespace topicdyn {

enum class SeedSource { kMediaWiki, kFixtureFile };

struct ConceptSeed {
  std::string name;  // e.g. "labour economics"
  SeedSource source = SeedSource::kFixtureFile;
  std::string fixture_path;  // required for kFixtureFile
};

/// Filtered, stemmed words of one concept, repetitions kept.
struct WordPool {
  std::string seed;
  std::vector<std::string> words;

  Bag counts() const;
};

/// "labour economics" -> "labour_economics.txt"
std::string fixture_file_name(const std::string& seed_name);
/// Fixture seed resolved under `directory` (defaults to the shipped pools).
ConceptSeed fixture_seed(const std::string& name, const std::string& directory = "");
std::string default_pool_directory();

/// Tokenize, drop stopwords and numerals, Porter-stem. Throws InvalidArgument
/// naming the seed when nothing survives.
WordPool pool_from_text(const std::string& seed, const std::string& text);

/// Resolves a seed to its pool. Fixture files ending in `.pool` hold one
/// token per line, optionally `<token>\t<count>`; any other fixture is raw
/// text passed through pool_from_text. MediaWiki seeds need a client.
WordPool fetch_concept_words(const ConceptSeed& seed, MediaWikiClient* client = nullptr);

/// Writes the `.pool` format.
void save_pool(const WordPool& pool, const std::string& path);

struct GenerateOptions {
  int min_words = 1000;
  int max_words = 10000;
};

/// Draws a uniform length in [min_words, max_words] and samples that many
/// words uniformly from the pool multiset.
Document generate_document(const WordPool& pool, std::mt19937_64& rng,
                           const GenerateOptions& options = {});

enum class ExperimentKind { kStability, kBirthDeath, kMerging, kSplitting };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kStability;
  std::vector<std::string> seeds_t;
  std::vector<std::string> seeds_t1;  // equal to seeds_t unless seeds are replaced
  int topics_t = 2;
  int topics_t1 = 2;
  int runs = 100;
  std::uint64_t rng_seed = 2017;

  /// Throws InvalidArgument on an inconsistent design.
  void validate() const;
  bool replaces_seeds() const { return seeds_t1 != seeds_t; }
};

struct RunIndexes {
  double merging = 0.0;
  double splitting = 0.0;
  double novelty = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  double mean_merging = 0.0;
  double mean_splitting = 0.0;
  double mean_novelty = 0.0;
  std::vector<RunIndexes> per_run;
  std::size_t missing_runs = 0;
};

struct ToyOptions {
  LdaConfig lda{.num_topics = 2, .alpha = 0.0, .beta = 0.01, .iterations = 200, .seed = 0};
  DynamicsOptions dynamics;
  GenerateOptions generate;
  int documents_per_seed = 1;
  std::size_t workers = 0;
};

using PoolMap = std::map<std::string, WordPool>;

/// Fetches every seed named by the specs once.
PoolMap load_pools(const std::vector<ExperimentSpec>& specs,
                   const std::function<WordPool(const std::string&)>& fetch);

/// One run: documents per seed at t (and per replacement seed at t+1, else
/// the same documents), independent LDAs with K_t and K_t1, then the window
/// pair indexes. Seeds derive from spec.rng_seed and run_index.
RunIndexes run_toy_evaluation(const ExperimentSpec& spec, const PoolMap& pools,
                              const ToyOptions& options = {}, std::size_t run_index = 0);

/// Every spec `runs` times. A failed run is retried once with a fresh seed,
/// then counted as missing and left out of the means.
std::vector<ExperimentResult> run_controlled_suite(const std::vector<ExperimentSpec>& specs,
                                                   const PoolMap& pools,
                                                   const ToyOptions& options = {});

/// The eight designs: stability, splitting, merging and birth/death, first with
/// two concept seeds and then with four.
std::vector<ExperimentSpec> default_suite(int runs = 100, std::uint64_t rng_seed = 2017);

/// Columns: experiment,seeds_t,seeds_t1,K_t,K_t1,runs,mean_MI,mean_SI,mean_NI
void write_experiments_csv(const std::vector<ExperimentResult>& results, std::ostream& out);
nlohmann::json to_json(const ExperimentResult& result);

/// Multi-year corpus of themed documents for pipeline tests and demos.
struct SyntheticCorpusOptions {
  int start_year = 1950;
  int years = 60;
  std::size_t num_documents = 5000;
  std::size_t active_themes = 30;
  std::size_t terms_per_theme = 40;
  int min_tokens = 40;
  int max_tokens = 80;
  // Themes replaced every `drift_period` years (a fraction `drift_fraction`).
  int drift_period = 10;
  double drift_fraction = 0.1;
  // Year at which every theme is replaced by one over fresh vocabulary.
  std::optional<int> turnover_year;
  double other_kind_fraction = 0.05;
  std::uint64_t seed = 7;
};

Corpus generate_synthetic_corpus(const SyntheticCorpusOptions& options);

}  // namespace topicdyn
