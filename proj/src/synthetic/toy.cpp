#include <iostream>
#include <optional>
#include <set>

#include "topicdyn/error.hpp"
#include "topicdyn/parallel.hpp"
#include "topicdyn/report_io.hpp"
#include "topicdyn/synthetic.hpp"

namespace topicdyn {

namespace {

std::string join_seeds(const std::vector<std::string>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i > 0) out += ';';
    out += seeds[i];
  }
  return out;
}

std::vector<Document> make_documents(const std::vector<std::string>& seeds, const PoolMap& pools,
                                     const ToyOptions& options, std::mt19937_64& rng) {
  std::vector<Document> docs;
  for (const std::string& seed : seeds) {
    const auto pool = pools.find(seed);
    if (pool == pools.end()) throw InvalidArgument("no word pool for concept seed \"" + seed + "\"");
    for (int i = 0; i < options.documents_per_seed; ++i) {
      docs.push_back(generate_document(pool->second, rng, options.generate));
      if (options.documents_per_seed > 1) docs.back().id += "#" + std::to_string(i);
    }
  }
  return docs;
}

std::vector<const Document*> pointers(const std::vector<Document>& docs) {
  std::vector<const Document*> out;
  for (const Document& d : docs) out.push_back(&d);
  return out;
}

RunIndexes run_with_seed(const ExperimentSpec& spec, const PoolMap& pools,
                         const ToyOptions& options, std::uint64_t run_seed) {
  std::mt19937_64 doc_rng(derive_seed(run_seed, 0));
  const std::vector<Document> docs_t = make_documents(spec.seeds_t, pools, options, doc_rng);
  std::vector<Document> docs_t1;
  if (spec.replaces_seeds()) docs_t1 = make_documents(spec.seeds_t1, pools, options, doc_rng);
  const std::vector<Document>& second = spec.replaces_seeds() ? docs_t1 : docs_t;

  LdaConfig config_t = options.lda;
  config_t.num_topics = spec.topics_t;
  config_t.seed = derive_seed(run_seed, 1);
  LdaConfig config_t1 = options.lda;
  config_t1.num_topics = spec.topics_t1;
  config_t1.seed = derive_seed(run_seed, 2);

  const auto ptr_t = pointers(docs_t);
  const auto ptr_t1 = pointers(second);
  const TopicModel model_t = train_lda(ptr_t, config_t, WindowInfo{0, 1, "t"});
  const TopicModel model_t1 = train_lda(ptr_t1, config_t1, WindowInfo{1, 2, "t+1"});
  const WindowPairReport report = compute_window_pair(model_t, model_t1, options.dynamics);
  return {report.merging_index, report.splitting_index, report.novelty_index};
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kStability: return "stability";
    case ExperimentKind::kBirthDeath: return "birth-death";
    case ExperimentKind::kMerging: return "merging";
    case ExperimentKind::kSplitting: return "splitting";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (ExperimentKind k : {ExperimentKind::kStability, ExperimentKind::kBirthDeath,
                           ExperimentKind::kMerging, ExperimentKind::kSplitting}) {
    if (text == to_string(k)) return k;
  }
  throw InvalidArgument("unknown experiment \"" + std::string(text) + "\"");
}

void ExperimentSpec::validate() const {
  const std::string name(to_string(kind));
  if (runs < 1) throw InvalidArgument(name + ": runs must be >= 1");
  if (seeds_t.empty() || seeds_t1.empty()) throw InvalidArgument(name + ": no concept seeds");
  for (const auto* list : {&seeds_t, &seeds_t1}) {
    for (const std::string& s : *list) {
      if (s.empty()) throw InvalidArgument(name + ": empty concept seed name");
    }
  }
  if (topics_t < 1 || topics_t1 < 1) throw InvalidArgument(name + ": topic counts must be >= 1");
  switch (kind) {
    case ExperimentKind::kStability:
      if (replaces_seeds() || topics_t != topics_t1) {
        throw InvalidArgument("stability keeps both the concept seeds and the topic count");
      }
      break;
    case ExperimentKind::kBirthDeath:
      if (!replaces_seeds()) throw InvalidArgument("birth-death requires replacement seeds");
      if (topics_t != topics_t1) throw InvalidArgument("birth-death keeps the topic count");
      break;
    case ExperimentKind::kMerging:
      if (replaces_seeds()) throw InvalidArgument("merging keeps the concept seeds");
      if (topics_t1 >= topics_t) throw InvalidArgument("merging requires K_t1 < K_t");
      break;
    case ExperimentKind::kSplitting:
      if (replaces_seeds()) throw InvalidArgument("splitting keeps the concept seeds");
      if (topics_t1 <= topics_t) throw InvalidArgument("splitting requires K_t1 > K_t");
      break;
  }
}

PoolMap load_pools(const std::vector<ExperimentSpec>& specs,
                   const std::function<WordPool(const std::string&)>& fetch) {
  PoolMap pools;
  for (const ExperimentSpec& spec : specs) {
    for (const auto* list : {&spec.seeds_t, &spec.seeds_t1}) {
      for (const std::string& seed : *list) {
        if (pools.count(seed) == 0) pools.emplace(seed, fetch(seed));
      }
    }
  }
  return pools;
}

RunIndexes run_toy_evaluation(const ExperimentSpec& spec, const PoolMap& pools,
                              const ToyOptions& options, std::size_t run_index) {
  spec.validate();
  return run_with_seed(spec, pools, options, derive_seed(spec.rng_seed, run_index));
}

std::vector<ExperimentResult> run_controlled_suite(const std::vector<ExperimentSpec>& specs,
                                                   const PoolMap& pools,
                                                   const ToyOptions& options) {
  for (const ExperimentSpec& spec : specs) spec.validate();

  struct Job {
    std::size_t spec;
    std::size_t run;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (int r = 0; r < specs[s].runs; ++r) jobs.push_back({s, static_cast<std::size_t>(r)});
  }
  std::vector<std::optional<RunIndexes>> outcomes(jobs.size());
  std::vector<std::string> failures(jobs.size());

  parallel_for(jobs.size(), options.workers, [&](std::size_t j) {
    const ExperimentSpec& spec = specs[jobs[j].spec];
    const std::size_t run = jobs[j].run;
    try {
      outcomes[j] = run_with_seed(spec, pools, options, derive_seed(spec.rng_seed, run));
      return;
    } catch (const std::exception& e) {
      failures[j] = e.what();
    }
    // Retry once on a seed no regular run uses.
    try {
      outcomes[j] = run_with_seed(spec, pools, options,
                                  derive_seed(spec.rng_seed, run + static_cast<std::size_t>(spec.runs)));
    } catch (const std::exception& e) {
      failures[j] += std::string("; retry: ") + e.what();
    }
  });

  std::vector<ExperimentResult> results(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s) results[s].spec = specs[s];
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    ExperimentResult& result = results[jobs[j].spec];
    if (outcomes[j]) {
      result.per_run.push_back(*outcomes[j]);
    } else {
      ++result.missing_runs;
      std::clog << "warning: " << to_string(result.spec.kind) << " run " << jobs[j].run
                << " failed twice and is excluded: " << failures[j] << '\n';
    }
  }
  for (ExperimentResult& result : results) {
    if (result.per_run.empty()) continue;
    double mi = 0.0, si = 0.0, ni = 0.0;
    for (const RunIndexes& r : result.per_run) {
      mi += r.merging;
      si += r.splitting;
      ni += r.novelty;
    }
    const double n = static_cast<double>(result.per_run.size());
    result.mean_merging = mi / n;
    result.mean_splitting = si / n;
    result.mean_novelty = ni / n;
  }
  return results;
}

std::vector<ExperimentSpec> default_suite(int runs, std::uint64_t rng_seed) {
  const std::vector<std::string> two{"labour economics", "innovation economics"};
  const std::vector<std::string> two_new{"cultural economics", "environmental economics"};
  const std::vector<std::string> four{"labour economics", "innovation economics",
                                      "cultural economics", "environmental economics"};
  const std::vector<std::string> four_new{"industrial economics", "transport economics",
                                          "economic history", "health economics"};
  using K = ExperimentKind;
  return {
      {K::kStability, two, two, 2, 2, runs, rng_seed},
      {K::kSplitting, two, two, 1, 2, runs, rng_seed},
      {K::kMerging, two, two, 2, 1, runs, rng_seed},
      {K::kBirthDeath, two, two_new, 2, 2, runs, rng_seed},
      {K::kStability, four, four, 4, 4, runs, rng_seed},
      {K::kSplitting, four, four, 4, 8, runs, rng_seed},
      {K::kMerging, four, four, 4, 2, runs, rng_seed},
      {K::kBirthDeath, four, four_new, 4, 4, runs, rng_seed},
  };
}

void write_experiments_csv(const std::vector<ExperimentResult>& results, std::ostream& out) {
  out << "experiment,seeds_t,seeds_t1,K_t,K_t1,runs,mean_MI,mean_SI,mean_NI\n";
  for (const ExperimentResult& r : results) {
    out << to_string(r.spec.kind) << ',' << join_seeds(r.spec.seeds_t) << ','
        << join_seeds(r.spec.seeds_t1) << ',' << r.spec.topics_t << ',' << r.spec.topics_t1 << ','
        << r.per_run.size() << ',' << format_double(r.mean_merging) << ','
        << format_double(r.mean_splitting) << ',' << format_double(r.mean_novelty) << '\n';
  }
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json runs = nlohmann::json::array();
  for (const RunIndexes& r : result.per_run) runs.push_back({r.merging, r.splitting, r.novelty});
  return {{"experiment", to_string(result.spec.kind)},
          {"seeds_t", result.spec.seeds_t},
          {"seeds_t1", result.spec.seeds_t1},
          {"K_t", result.spec.topics_t},
          {"K_t1", result.spec.topics_t1},
          {"runs_requested", result.spec.runs},
          {"runs", result.per_run.size()},
          {"missing_runs", result.missing_runs},
          {"rng_seed", result.spec.rng_seed},
          {"mean_MI", result.mean_merging},
          {"mean_SI", result.mean_splitting},
          {"mean_NI", result.mean_novelty},
          {"per_run", runs}};
}

}  // namespace topicdyn
