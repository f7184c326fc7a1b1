#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "topicdyn/error.hpp"
#include "topicdyn/parallel.hpp"
#include "topicdyn/pipeline.hpp"
#include "topicdyn/report_io.hpp"

namespace topicdyn {

namespace fs = std::filesystem;

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void text(std::string_view s) {
    number(static_cast<std::uint64_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void number(std::uint64_t v) { bytes(&v, sizeof v); }
  void real(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    number(bits);
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

void write_text_file(const fs::path& path, const std::string& content,
                     std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
  written.push_back(path.string());
}

fs::path cache_path(const std::string& dir, const TopicModel& model) {
  std::string name = model_file_name(model);
  name.insert(name.size() - std::strlen(".json"), "_" + model.cache_key);
  return fs::path(dir) / name;
}

std::optional<TopicModel> load_cached(const fs::path& path, const std::string& key) {
  if (!fs::exists(path)) return std::nullopt;
  try {
    TopicModel model = load_model(path.string());
    if (model.cache_key == key) return model;
  } catch (const Error& e) {
    std::clog << "warning: ignoring cached model " << path.string() << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

}  // namespace

std::string model_cache_key(int start, int end, std::span<const Document* const> documents,
                            const LdaConfig& config) {
  Fnv1a h;
  h.text("topicdyn-model-cache-v1");
  h.number(static_cast<std::uint64_t>(static_cast<std::int64_t>(start)));
  h.number(static_cast<std::uint64_t>(static_cast<std::int64_t>(end)));
  h.number(documents.size());
  for (const Document* d : documents) {
    h.text(d->id);
    h.number(static_cast<std::uint64_t>(static_cast<std::int64_t>(d->year)));
    h.number(d->counts.size());
    for (const auto& [term, count] : d->counts) {
      h.text(term);
      h.number(static_cast<std::uint64_t>(count));
    }
  }
  h.number(static_cast<std::uint64_t>(config.num_topics));
  h.real(config.effective_alpha());
  h.real(config.beta);
  h.number(static_cast<std::uint64_t>(config.iterations));
  h.number(config.seed);
  return h.hex();
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();

  StopwordSet custom_stopwords;
  LoadOptions load;
  load.kind_filter = config.kind_filter;
  if (!config.stopwords_path.empty()) {
    custom_stopwords = load_stopwords(config.stopwords_path);
    load.stopwords = &custom_stopwords;
  }
  const CorpusFormat format = config.corpus_format.value_or(
      fs::is_directory(config.corpus_path) ? CorpusFormat::kPlainTextDir : CorpusFormat::kJsonlBag);
  const Corpus corpus = load_corpus(config.corpus_path, format, load);

  int first_year = corpus.documents.front().year;
  int last_year = first_year;
  for (const Document& d : corpus.documents) {
    first_year = std::min(first_year, d.year);
    last_year = std::max(last_year, d.year);
  }
  const int start = config.start_year.value_or(first_year);
  const int end = config.end_year.value_or(last_year + 1);
  if (start >= end) throw ConfigError("empty year range after applying corpus bounds");

  const std::vector<TimeWindow> windows =
      slice_windows(corpus, start, end, config.window_width, SliceOptions{config.min_documents});
  for (const TimeWindow& w : windows) {
    if (!w.usable) {
      std::clog << "warning: window " << w.label() << " has " << w.documents.size()
                << " documents (minimum " << config.min_documents << "); transitions touching it are skipped\n";
    }
  }

  if (!config.cache_dir.empty()) fs::create_directories(config.cache_dir);
  const std::size_t saved_terms = std::max<std::size_t>(100, config.dynamics.top_terms);

  std::vector<std::optional<TopicModel>> models(windows.size());
  std::vector<char> from_cache(windows.size(), 0);
  parallel_for(windows.size(), config.workers, [&](std::size_t i) {
    const TimeWindow& w = windows[i];
    if (!w.usable) return;
    LdaConfig lda = config.lda;
    lda.seed = config.lda.seed ^ static_cast<std::uint64_t>(w.index);
    const std::string key = model_cache_key(w.start, w.end, w.documents, lda);
    if (!config.cache_dir.empty()) {
      TopicModel probe;
      probe.window = {w.start, w.end, w.label()};
      probe.config = lda;
      probe.cache_key = key;
      const fs::path path = cache_path(config.cache_dir, probe);
      if (auto cached = load_cached(path, key)) {
        models[i] = std::move(*cached);
        from_cache[i] = 1;
        return;
      }
      TopicModel model = train_lda(w, lda);
      model.cache_key = key;
      save_model(model, path.string(), saved_terms);
      // Reload so fresh and cached runs see the same stored precision.
      models[i] = load_model(path.string());
      return;
    }
    TopicModel model = train_lda(w, lda);
    model.cache_key = key;
    models[i] = std::move(model);
  });

  PipelineResult result;
  result.windows = windows.size();
  result.cache_hits = static_cast<std::size_t>(std::count(from_cache.begin(), from_cache.end(), 1));
  for (std::size_t i = 0; i + 1 < windows.size(); ++i) {
    if (!models[i] || !models[i + 1]) {
      ++result.skipped_transitions;
      std::clog << "warning: skipping transition " << windows[i].start << "-" << windows[i + 1].end
                << " (unusable window)\n";
      continue;
    }
    result.reports.push_back(compute_window_pair(*models[i], *models[i + 1], config.dynamics));
  }
  if (windows.size() < 2) {
    std::clog << "notice: the corpus spans a single window (" << start << "-" << end
              << "); there are no transitions to analyze\n";
  }

  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);
  {
    std::ostringstream csv;
    write_indexes_csv(result.reports, csv);
    write_text_file(out_dir / "indexes.csv", csv.str(), result.written_files);
  }
  for (const WindowPairReport& report : result.reports) {
    const std::string stem = pair_file_stem(report);
    write_text_file(out_dir / ("report_" + stem + ".json"), to_json(report).dump(2) + "\n",
                    result.written_files);
    std::ostringstream dot, edges;
    write_network_dot(report, dot);
    write_edge_list_csv(report, edges);
    write_text_file(out_dir / ("network_" + stem + ".dot"), dot.str(), result.written_files);
    write_text_file(out_dir / ("network_" + stem + ".csv"), edges.str(), result.written_files);
  }
  if (!result.reports.empty()) {
    const auto plots = emit_plot_data(result.reports, out_dir.string());
    result.written_files.insert(result.written_files.end(), plots.begin(), plots.end());
  }
  return result;
}

std::vector<std::string> emit_plot_data(const std::vector<WindowPairReport>& reports,
                                        const std::string& directory) {
  if (reports.empty()) throw InvalidArgument("no reports to plot");
  fs::create_directories(directory);
  struct Series {
    const char* name;
    std::vector<std::pair<const char*, double WindowPairReport::*>> columns;
  };
  const std::vector<Series> series{
      {"plot_MI.csv", {{"MI", &WindowPairReport::merging_index}}},
      {"plot_SI.csv", {{"SI", &WindowPairReport::splitting_index}}},
      {"plot_NI.csv", {{"NI", &WindowPairReport::novelty_index}}},
      {"plot_MI_NI.csv", {{"MI", &WindowPairReport::merging_index}, {"NI", &WindowPairReport::novelty_index}}},
      {"plot_SI_NI.csv", {{"SI", &WindowPairReport::splitting_index}, {"NI", &WindowPairReport::novelty_index}}},
  };
  std::vector<std::string> written;
  for (const Series& s : series) {
    std::ostringstream out;
    out << "transition";
    for (const auto& column : s.columns) out << ',' << column.first;
    out << '\n';
    for (const WindowPairReport& r : reports) {
      out << r.label();
      for (const auto& column : s.columns) out << ',' << format_double(r.*(column.second));
      out << '\n';
    }
    write_text_file(fs::path(directory) / s.name, out.str(), written);
  }
  return written;
}

std::vector<std::pair<int, int>> sweep_points(int base_topics, int base_width,
                                              const std::vector<int>& topic_grid,
                                              const std::vector<int>& width_grid) {
  if (topic_grid.empty() || width_grid.empty()) throw ConfigError("sweep grids must not be empty");
  auto contains = [](const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); };
  const int anchor_k = contains(topic_grid, base_topics) ? base_topics : topic_grid.front();
  const int anchor_w = contains(width_grid, base_width) ? base_width : width_grid.front();
  std::vector<std::pair<int, int>> points;
  auto add = [&](int k, int w) {
    if (std::find(points.begin(), points.end(), std::make_pair(k, w)) == points.end()) {
      points.emplace_back(k, w);
    }
  };
  for (int k : topic_grid) add(k, anchor_w);
  for (int w : width_grid) add(anchor_k, w);
  return points;
}

SweepReport run_sweep(const PipelineConfig& config, const std::vector<int>& topic_grid,
                      const std::vector<int>& width_grid) {
  config.validate();
  for (int k : topic_grid) {
    if (k < 1) throw ConfigError("sweep topic counts must be >= 1");
  }
  for (int w : width_grid) {
    if (w < 1) throw ConfigError("sweep window widths must be >= 1");
  }
  const auto points = sweep_points(config.lda.num_topics, config.window_width, topic_grid, width_grid);

  SweepReport sweep;
  fs::create_directories(config.output_dir);
  std::ostringstream csv;
  csv << "K,width,transition," << indexes_csv_header() << '\n';
  for (const auto& [k, w] : points) {
    SweepPoint point;
    point.num_topics = k;
    point.window_width = w;
    point.directory = (fs::path(config.output_dir) / ("K" + std::to_string(k) + "_w" + std::to_string(w))).string();
    PipelineConfig run = config;
    run.lda.num_topics = k;
    run.window_width = w;
    run.output_dir = point.directory;
    try {
      point.result = run_pipeline(run);
      for (const WindowPairReport& r : point.result->reports) {
        csv << k << ',' << w << ',' << r.label() << ',' << indexes_csv_row(r) << '\n';
      }
    } catch (const std::exception& e) {
      point.error = e.what();
      std::clog << "warning: sweep point K=" << k << " width=" << w << " failed: " << e.what() << '\n';
    }
    sweep.points.push_back(std::move(point));
  }
  std::vector<std::string> written;
  write_text_file(fs::path(config.output_dir) / "sweep.csv", csv.str(), written);
  sweep.csv_path = written.front();
  return sweep;
}

}  // namespace topicdyn
