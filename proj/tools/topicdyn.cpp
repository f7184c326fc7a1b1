// Command-line front end: analyze, sweep, toy, stability, stem, synth-corpus.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topicdyn/error.hpp"
#include "topicdyn/mediawiki.hpp"
#include "topicdyn/pipeline.hpp"
#include "topicdyn/simd.hpp"
#include "topicdyn/stability.hpp"
#include "topicdyn/synthetic.hpp"
#include "topicdyn/text.hpp"

namespace fs = std::filesystem;
using namespace topicdyn;

namespace {

constexpr int kExitFatal = 1;
constexpr int kExitConfig = 2;

struct CorpusArgs {
  std::string path;
  std::string format = "auto";
  int start = 0;
  int end = 0;
  CLI::Option* start_opt = nullptr;
  CLI::Option* end_opt = nullptr;
  std::string kind = "research-article";
  std::string stopwords;
  std::size_t min_documents = 10;
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
  cmd->add_option("--corpus", args.path, "Corpus: jsonl-bag file or plain-text directory (required)");
  cmd->add_option("--format", args.format, "auto, jsonl or text-dir")
      ->check(CLI::IsMember({"auto", "jsonl", "text-dir"}))
      ->capture_default_str();
  args.start_opt = cmd->add_option("--start", args.start, "First year (default: earliest document)");
  args.end_opt = cmd->add_option("--end", args.end, "End year, exclusive (default: latest document + 1)");
  cmd->add_option("--kind", args.kind, "Keep documents of this kind when the field is present, or 'any'")
      ->check(CLI::IsMember({"research-article", "other", "any"}))
      ->capture_default_str();
  cmd->add_option("--stopwords", args.stopwords, "Stopword list, one term per line");
  cmd->add_option("--min-docs", args.min_documents, "Minimum documents for a usable window")
      ->capture_default_str();
}

void add_lda_options(CLI::App* cmd, LdaConfig& lda) {
  cmd->add_option("-K,--topics", lda.num_topics, "Topics per window")->capture_default_str();
  cmd->add_option("--alpha", lda.alpha, "Document-topic prior (0: 50/K)")->capture_default_str();
  cmd->add_option("--beta", lda.beta, "Topic-word prior")->capture_default_str();
  cmd->add_option("--iterations", lda.iterations, "Gibbs sweeps")->capture_default_str();
  cmd->add_option("--seed", lda.seed, "Random seed")->capture_default_str();
}

void add_dynamics_options(CLI::App* cmd, DynamicsOptions& dyn, std::string& correction) {
  cmd->add_option("-k,--top-terms", dyn.top_terms, "Terms per topic vector")->capture_default_str();
  cmd->add_option("--correction", correction, "none, divide-raw-Q or divide-Q-squared")
      ->check(CLI::IsMember({"none", "divide-raw-Q", "divide-Q-squared"}))
      ->capture_default_str();
  cmd->add_flag("--swap-operands", dyn.correction.swap_operands,
                "divide-Q-squared: divide Q Q^T by the projection instead");
  cmd->add_option("--epsilon", dyn.correction.epsilon, "Denominator floor")->capture_default_str();
  cmd->add_option("--tau", dyn.tau, "Edge threshold for transitions, births and deaths")
      ->capture_default_str();
}

std::optional<CorpusFormat> parse_format(const std::string& f) {
  if (f == "jsonl") return CorpusFormat::kJsonlBag;
  if (f == "text-dir") return CorpusFormat::kPlainTextDir;
  return std::nullopt;
}

PipelineConfig make_pipeline_config(const CorpusArgs& c, const LdaConfig& lda,
                                    DynamicsOptions dyn, const std::string& correction) {
  PipelineConfig config;
  config.corpus_path = c.path;
  config.corpus_format = parse_format(c.format);
  if (c.start_opt->count() > 0) config.start_year = c.start;
  if (c.end_opt->count() > 0) config.end_year = c.end;
  config.kind_filter = c.kind == "any" ? std::nullopt : parse_document_kind(c.kind);
  config.stopwords_path = c.stopwords;
  config.min_documents = c.min_documents;
  config.lda = lda;
  dyn.correction.mode = parse_correction_mode(correction);
  config.dynamics = dyn;
  return config;
}

// CLI11 only reads config files attached to the top-level app, so
// subcommand files are applied here. Flags given on the command line win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::FileError& e) {
    throw ConfigError(e.what());
  }
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && item.parents.front() != cmd->get_name()) continue;
    CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
    if (opt == nullptr && item.name.size() == 1) opt = cmd->get_option_no_throw("-" + item.name);
    if (opt == nullptr || item.name == "config") {
      throw ConfigError("unknown key \"" + item.name + "\" in " + path);
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError(path + ": " + item.name + ": " + e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic dynamics across time windows: merging, splitting and novelty of LDA topics"};
  app.require_subcommand(1);
  std::map<CLI::App*, std::string> config_files;
  const auto add_config = [&config_files](CLI::App* cmd) {
    cmd->add_option("--config", config_files[cmd], "Key = value config file; command-line flags take precedence");
  };
  std::string isa;
  app.add_option("--isa", isa, "Kernel set: scalar or avx2 (default: best supported)")
      ->check(CLI::IsMember({"scalar", "avx2"}));

  // analyze
  CLI::App* analyze = app.add_subcommand("analyze", "Run the window-pair pipeline over a corpus");
  add_config(analyze);
  CorpusArgs analyze_corpus;
  LdaConfig analyze_lda;
  DynamicsOptions analyze_dyn;
  std::string analyze_correction = "divide-raw-Q";
  int analyze_width = 10;
  std::string analyze_out = "topicdyn-out";
  std::string analyze_cache;
  std::size_t analyze_workers = 0;
  add_corpus_options(analyze, analyze_corpus);
  add_lda_options(analyze, analyze_lda);
  add_dynamics_options(analyze, analyze_dyn, analyze_correction);
  analyze->add_option("-w,--width", analyze_width, "Window width in years")->capture_default_str();
  analyze->add_option("-o,--out", analyze_out, "Output directory")->capture_default_str();
  analyze->add_option("--cache", analyze_cache, "Model cache directory");
  analyze->add_option("-j,--workers", analyze_workers, "Training threads (0: all cores)");

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Vary topics and window width one at a time");
  add_config(sweep);
  CorpusArgs sweep_corpus;
  LdaConfig sweep_lda;
  DynamicsOptions sweep_dyn;
  std::string sweep_correction = "divide-raw-Q";
  int sweep_width = 10;
  std::string sweep_out = "topicdyn-sweep";
  std::string sweep_cache;
  std::size_t sweep_workers = 0;
  std::vector<int> topic_grid{25, 50, 100};
  std::vector<int> width_grid{5, 10, 20};
  add_corpus_options(sweep, sweep_corpus);
  add_lda_options(sweep, sweep_lda);
  add_dynamics_options(sweep, sweep_dyn, sweep_correction);
  sweep->add_option("-w,--width", sweep_width, "Base window width in years")->capture_default_str();
  sweep->add_option("--topic-grid", topic_grid, "Topic counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--width-grid", width_grid, "Window widths")->delimiter(',')->capture_default_str();
  sweep->add_option("-o,--out", sweep_out, "Output directory")->capture_default_str();
  sweep->add_option("--cache", sweep_cache, "Model cache directory");
  sweep->add_option("-j,--workers", sweep_workers, "Training threads (0: all cores)");

  // toy
  CLI::App* toy = app.add_subcommand("toy", "Controlled experiments on concept-seed documents");
  add_config(toy);
  int toy_runs = 100;
  std::uint64_t toy_seed = 2017;
  std::string toy_pools;
  bool toy_mediawiki = false;
  std::string toy_save_pools;
  std::string toy_out = "topicdyn-toy";
  std::vector<std::string> toy_only;
  ToyOptions toy_options;
  std::string toy_correction = "divide-raw-Q";
  toy->add_option("--runs", toy_runs, "Runs per experiment")->capture_default_str();
  toy->add_option("--seed", toy_seed, "Suite seed")->capture_default_str();
  toy->add_option("--pools", toy_pools, "Fixture directory (default: bundled pools)");
  toy->add_flag("--mediawiki", toy_mediawiki, "Fetch concept pages through the MediaWiki API");
  toy->add_option("--save-pools", toy_save_pools, "Write the resolved pools here as .pool files");
  toy->add_option("--only", toy_only, "Restrict to experiments of these kinds")
      ->check(CLI::IsMember({"stability", "birth-death", "merging", "splitting"}));
  toy->add_option("--iterations", toy_options.lda.iterations, "Gibbs sweeps")->capture_default_str();
  toy->add_option("--beta", toy_options.lda.beta, "Topic-word prior")->capture_default_str();
  toy->add_option("--docs-per-seed", toy_options.documents_per_seed, "Documents per concept seed")
      ->capture_default_str();
  toy->add_option("--min-words", toy_options.generate.min_words)->capture_default_str();
  toy->add_option("--max-words", toy_options.generate.max_words)->capture_default_str();
  add_dynamics_options(toy, toy_options.dynamics, toy_correction);
  toy->add_option("-o,--out", toy_out, "Output directory")->capture_default_str();
  toy->add_option("-j,--workers", toy_options.workers, "Threads (0: all cores)");

  // stability
  CLI::App* stab = app.add_subcommand("stability", "Score candidate topic counts over one window");
  add_config(stab);
  CorpusArgs stab_corpus;
  StabilityScanConfig stab_config;
  std::string stab_matching = "greedy";
  std::string stab_out = "stability.csv";
  add_corpus_options(stab, stab_corpus);
  add_lda_options(stab, stab_config.lda);
  stab->add_option("--k-min", stab_config.k_min)->capture_default_str();
  stab->add_option("--k-max", stab_config.k_max)->capture_default_str();
  stab->add_option("--step", stab_config.step)->capture_default_str();
  stab->add_option("--reference-runs", stab_config.reference_runs)->capture_default_str();
  stab->add_option("--bootstrap-runs", stab_config.bootstrap_runs)->capture_default_str();
  stab->add_option("--top", stab_config.top_terms, "Ranking depth")->capture_default_str();
  stab->add_option("--fraction", stab_config.sample_fraction, "Bootstrap sample fraction")
      ->capture_default_str();
  stab->add_option("--matching", stab_matching)
      ->check(CLI::IsMember({"greedy", "optimal"}))
      ->capture_default_str();
  stab->add_flag("--reuse-seed", stab_config.reuse_reference_seed,
                 "Bootstrap models use the reference seed");
  stab->add_option("-o,--out", stab_out, "Output CSV")->capture_default_str();
  stab->add_option("-j,--workers", stab_config.workers, "Threads (0: all cores)");

  // stem
  CLI::App* stem = app.add_subcommand("stem", "Porter-stem words (arguments, or stdin lines)");
  std::vector<std::string> stem_words;
  stem->add_option("words", stem_words);

  // synth-corpus
  CLI::App* synth = app.add_subcommand("synth-corpus", "Write a seeded multi-year synthetic corpus");
  SyntheticCorpusOptions synth_options;
  int synth_turnover = 0;
  std::string synth_out;
  synth->add_option("-o,--out", synth_out, "Output jsonl path")->required();
  synth->add_option("--docs", synth_options.num_documents)->capture_default_str();
  synth->add_option("--start-year", synth_options.start_year)->capture_default_str();
  synth->add_option("--years", synth_options.years)->capture_default_str();
  synth->add_option("--themes", synth_options.active_themes)->capture_default_str();
  synth->add_option("--terms-per-theme", synth_options.terms_per_theme)->capture_default_str();
  synth->add_option("--min-tokens", synth_options.min_tokens)->capture_default_str();
  synth->add_option("--max-tokens", synth_options.max_tokens)->capture_default_str();
  CLI::Option* turnover_opt =
      synth->add_option("--turnover-year", synth_turnover, "Replace every theme in this year");
  synth->add_option("--seed", synth_options.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (CLI::App* cmd : app.get_subcommands()) {
      if (auto it = config_files.find(cmd); it != config_files.end() && !it->second.empty()) {
        apply_config_file(cmd, it->second);
      }
    }
    if (!isa.empty()) simd::set_isa(isa == "avx2" ? simd::Isa::kAvx2 : simd::Isa::kScalar);

    if (*analyze) {
      PipelineConfig config = make_pipeline_config(analyze_corpus, analyze_lda, analyze_dyn, analyze_correction);
      config.window_width = analyze_width;
      config.output_dir = analyze_out;
      config.cache_dir = analyze_cache;
      config.workers = analyze_workers;
      const PipelineResult result = run_pipeline(config);
      std::cout << result.windows << " windows, " << result.reports.size() << " transitions";
      if (result.skipped_transitions > 0) std::cout << " (" << result.skipped_transitions << " skipped)";
      if (result.cache_hits > 0) std::cout << ", " << result.cache_hits << " cached models";
      std::cout << "; outputs in " << config.output_dir << '\n';
    } else if (*sweep) {
      PipelineConfig config = make_pipeline_config(sweep_corpus, sweep_lda, sweep_dyn, sweep_correction);
      config.window_width = sweep_width;
      config.output_dir = sweep_out;
      config.cache_dir = sweep_cache;
      config.workers = sweep_workers;
      const SweepReport report = run_sweep(config, topic_grid, width_grid);
      std::size_t failed = 0;
      for (const SweepPoint& p : report.points) {
        std::cout << "K=" << p.num_topics << " width=" << p.window_width << ": ";
        if (p.result) {
          std::cout << p.result->reports.size() << " transitions\n";
        } else {
          ++failed;
          std::cout << "failed: " << p.error << '\n';
        }
      }
      std::cout << "combined series in " << report.csv_path << '\n';
      if (failed == report.points.size()) return kExitFatal;
    } else if (*toy) {
      toy_options.dynamics.correction.mode = parse_correction_mode(toy_correction);
      std::vector<ExperimentSpec> specs = default_suite(toy_runs, toy_seed);
      if (!toy_only.empty()) {
        std::erase_if(specs, [&](const ExperimentSpec& s) {
          return std::find(toy_only.begin(), toy_only.end(), std::string(to_string(s.kind))) == toy_only.end();
        });
      }
      for (const auto& s : specs) {
        try {
          s.validate();
        } catch (const InvalidArgument& e) {
          throw ConfigError(e.what());
        }
      }
      std::unique_ptr<MediaWikiClient> client;
      if (toy_mediawiki) client = std::make_unique<MediaWikiClient>(make_https_transport());
      const PoolMap pools = load_pools(specs, [&](const std::string& name) {
        ConceptSeed seed = fixture_seed(name, toy_pools);
        if (toy_mediawiki) seed.source = SeedSource::kMediaWiki;
        return fetch_concept_words(seed, client.get());
      });
      if (!toy_save_pools.empty()) {
        fs::create_directories(toy_save_pools);
        for (const auto& [name, pool] : pools) {
          std::string file = fixture_file_name(name);
          file.replace(file.size() - 4, 4, ".pool");
          save_pool(pool, (fs::path(toy_save_pools) / file).string());
        }
      }
      const auto results = run_controlled_suite(specs, pools, toy_options);
      fs::create_directories(toy_out);
      {
        std::ofstream csv(fs::path(toy_out) / "experiments.csv");
        write_experiments_csv(results, csv);
      }
      {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : results) doc.push_back(to_json(r));
        std::ofstream json(fs::path(toy_out) / "experiments.json");
        json << doc.dump(2) << '\n';
      }
      write_experiments_csv(results, std::cout);
    } else if (*stab) {
      PipelineConfig probe = make_pipeline_config(stab_corpus, stab_config.lda, {}, "none");
      probe.validate();
      stab_config.matching = parse_matching_mode(stab_matching);
      try {
        stab_config.validate();
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
      StopwordSet custom;
      LoadOptions load;
      load.kind_filter = probe.kind_filter;
      if (!probe.stopwords_path.empty()) {
        custom = load_stopwords(probe.stopwords_path);
        load.stopwords = &custom;
      }
      const CorpusFormat format = probe.corpus_format.value_or(
          fs::is_directory(probe.corpus_path) ? CorpusFormat::kPlainTextDir : CorpusFormat::kJsonlBag);
      const Corpus corpus = load_corpus(probe.corpus_path, format, load);
      std::vector<const Document*> docs;
      for (const Document& d : corpus.documents) {
        if (probe.start_year && d.year < *probe.start_year) continue;
        if (probe.end_year && d.year >= *probe.end_year) continue;
        docs.push_back(&d);
      }
      if (docs.size() < probe.min_documents) {
        throw InvalidArgument("window holds " + std::to_string(docs.size()) + " documents, fewer than " +
                              std::to_string(probe.min_documents));
      }
      const auto points = stability_scan(docs, stab_config);
      if (const auto parent = fs::path(stab_out).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
      }
      std::ofstream out(stab_out);
      if (!out) throw IoError("cannot write " + stab_out);
      write_stability_csv(points, out);
      write_stability_csv(points, std::cout);
    } else if (*stem) {
      if (stem_words.empty()) {
        std::string line;
        while (std::getline(std::cin, line)) std::cout << porter_stem(line) << '\n';
      } else {
        for (const auto& w : stem_words) std::cout << porter_stem(w) << '\n';
      }
    } else if (*synth) {
      if (turnover_opt->count() > 0) synth_options.turnover_year = synth_turnover;
      const Corpus corpus = generate_synthetic_corpus(synth_options);
      if (const auto parent = fs::path(synth_out).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
      }
      save_corpus_jsonl(corpus, synth_out);
      std::cout << corpus.documents.size() << " documents, " << corpus.vocabulary_size()
                << " terms written to " << synth_out << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return 0;
}
