#include <filesystem>
#include <fstream>
#include <sstream>

#include "topicdyn/error.hpp"
#include "topicdyn/synthetic.hpp"
#include "topicdyn/text.hpp"

namespace topicdyn {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

WordPool pool_from_counts(const std::string& seed, const Bag& counts) {
  WordPool pool{seed, {}};
  for (const auto& [word, count] : counts) {
    for (std::int64_t i = 0; i < count; ++i) pool.words.push_back(word);
  }
  if (pool.words.empty()) {
    throw InvalidArgument("word pool for concept seed \"" + seed + "\" is empty after filtering");
  }
  return pool;
}

WordPool parse_pool_file(const std::string& seed, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read pool fixture " + path + " for concept seed \"" + seed + "\"");
  Bag counts;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string token = line;
    std::int64_t count = 1;
    if (const auto tab = line.find('\t'); tab != std::string::npos) {
      token = line.substr(0, tab);
      try {
        std::size_t used = 0;
        count = std::stoll(line.substr(tab + 1), &used);
        if (used != line.size() - tab - 1) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        throw FormatError(path + ":" + std::to_string(line_number) + ": bad count");
      }
      if (count < 1) throw FormatError(path + ":" + std::to_string(line_number) + ": count < 1");
    }
    if (token.empty()) throw FormatError(path + ":" + std::to_string(line_number) + ": empty token");
    counts[token] += count;
  }
  return pool_from_counts(seed, counts);
}

}  // namespace

Bag WordPool::counts() const {
  Bag bag;
  for (const std::string& w : words) ++bag[w];
  return bag;
}

std::string fixture_file_name(const std::string& seed_name) {
  std::string name;
  for (char c : seed_name) {
    if (c == ' ') {
      name += '_';
    } else if (c >= 'A' && c <= 'Z') {
      name += static_cast<char>(c - 'A' + 'a');
    } else {
      name += c;
    }
  }
  return name + ".txt";
}

std::string default_pool_directory() { return std::string(TOPICDYN_DATA_DIR) + "/pools"; }

ConceptSeed fixture_seed(const std::string& name, const std::string& directory) {
  const std::string dir = directory.empty() ? default_pool_directory() : directory;
  return {name, SeedSource::kFixtureFile, (std::filesystem::path(dir) / fixture_file_name(name)).string()};
}

WordPool pool_from_text(const std::string& seed, const std::string& text) {
  const Bag counts = preprocess(text, default_stopwords(), PreprocessOptions{.drop_numeric = true});
  return pool_from_counts(seed, counts);
}

WordPool fetch_concept_words(const ConceptSeed& seed, MediaWikiClient* client) {
  if (seed.name.empty()) throw InvalidArgument("concept seed name is empty");
  if (seed.source == SeedSource::kMediaWiki) {
    if (client == nullptr) {
      throw InvalidArgument("concept seed \"" + seed.name + "\" needs a MediaWiki client");
    }
    return pool_from_text(seed.name, client->fetch_extract(seed.name));
  }
  if (seed.fixture_path.empty() || !std::filesystem::is_regular_file(seed.fixture_path)) {
    throw IoError("no fixture for concept seed \"" + seed.name + "\" (" + seed.fixture_path + ")");
  }
  if (std::filesystem::path(seed.fixture_path).extension() == ".pool") {
    return parse_pool_file(seed.name, seed.fixture_path);
  }
  return pool_from_text(seed.name, read_file(seed.fixture_path));
}

void save_pool(const WordPool& pool, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& [word, count] : pool.counts()) out << word << '\t' << count << '\n';
  if (!out) throw IoError("failed writing " + path);
}

Document generate_document(const WordPool& pool, std::mt19937_64& rng,
                           const GenerateOptions& options) {
  if (pool.words.empty()) throw InvalidArgument("cannot sample from an empty word pool");
  if (options.min_words < 1 || options.max_words < options.min_words) {
    throw InvalidArgument("document length range is empty");
  }
  std::uniform_int_distribution<int> length(options.min_words, options.max_words);
  std::uniform_int_distribution<std::size_t> pick(0, pool.words.size() - 1);
  Document doc;
  doc.id = pool.seed;
  const int n = length(rng);
  for (int i = 0; i < n; ++i) ++doc.counts[pool.words[pick(rng)]];
  return doc;
}

}  // namespace topicdyn
