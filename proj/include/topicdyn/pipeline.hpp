#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topicdyn/corpus.hpp"
#include "topicdyn/dynamics.hpp"
#include "topicdyn/lda.hpp"

namespace topicdyn {

struct PipelineConfig {
  std::string corpus_path;
  std::optional<CorpusFormat> corpus_format;  // unset: directories are plain text, files jsonl
  std::optional<int> start_year;              // unset: earliest document year
  std::optional<int> end_year;                // exclusive; unset: latest document year + 1
  int window_width = 10;
  LdaConfig lda;
  DynamicsOptions dynamics;
  std::size_t min_documents = 10;
  std::optional<DocumentKind> kind_filter = DocumentKind::kResearchArticle;
  std::string stopwords_path;  // empty: built-in list
  std::string output_dir = "topicdyn-out";
  std::string cache_dir;  // empty: no model cache
  std::size_t workers = 0;

  /// Throws ConfigError.
  void validate() const;
};

struct PipelineResult {
  std::vector<WindowPairReport> reports;
  std::size_t windows = 0;
  std::size_t skipped_transitions = 0;
  std::size_t cache_hits = 0;
  std::vector<std::string> written_files;
};

/// FNV-1a over the window bounds, every document (id, year, counts) and the
/// LDA configuration, as 16 hex digits.
std::string model_cache_key(int start, int end, std::span<const Document* const> documents,
                            const LdaConfig& config);

/// Loads the corpus, trains one model per usable window (seed = lda.seed XOR
/// window index), computes a report per adjacent pair and writes indexes.csv,
/// report_<stem>.json, network_<stem>.dot, network_<stem>.csv and plot_*.csv
/// into output_dir. Pairs touching an unusable window are skipped.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Writes plot_MI.csv, plot_SI.csv, plot_NI.csv, plot_MI_NI.csv and
/// plot_SI_NI.csv (x = transition label). Throws InvalidArgument on an empty
/// report list. Returns the written paths.
std::vector<std::string> emit_plot_data(const std::vector<WindowPairReport>& reports,
                                        const std::string& directory);

/// Grid points varying one dimension at a time: every K at the anchor width,
/// then every width at the anchor K. Anchors are the base values when they
/// appear in the grids, otherwise the first grid entries.
std::vector<std::pair<int, int>> sweep_points(int base_topics, int base_width,
                                              const std::vector<int>& topic_grid,
                                              const std::vector<int>& width_grid);

struct SweepPoint {
  int num_topics = 0;
  int window_width = 0;
  std::string directory;
  std::optional<PipelineResult> result;
  std::string error;  // set when the point failed
};

struct SweepReport {
  std::vector<SweepPoint> points;
  std::string csv_path;
};

/// One pipeline run per sweep point into output_dir/K<k>_w<width>, plus a
/// combined output_dir/sweep.csv keyed by (K, width, transition). A failing
/// point is recorded and the sweep continues.
SweepReport run_sweep(const PipelineConfig& config, const std::vector<int>& topic_grid,
                      const std::vector<int>& width_grid);

}  // namespace topicdyn
