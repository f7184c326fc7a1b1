#include <fstream>

#include <nlohmann/json.hpp>

#include "topicdyn/error.hpp"
#include "topicdyn/lda.hpp"

namespace topicdyn {
using nlohmann::json;

namespace {
constexpr const char* kFormat = "topicdyn-model";
constexpr int kVersion = 1;
}  // namespace

std::string model_file_name(const TopicModel& model) {
  return "model_" + std::to_string(model.window.start) + "_" + std::to_string(model.window.end) +
         "_K" + std::to_string(model.config.num_topics) + ".json";
}

void save_model(const TopicModel& model, const std::string& path, std::size_t saved_terms) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["window"] = {{"start", model.window.start}, {"end", model.window.end}, {"id", model.window.id}};
  doc["config"] = {{"num_topics", model.config.num_topics},
                   {"alpha", model.config.alpha},
                   {"beta", model.config.beta},
                   {"iterations", model.config.iterations},
                   {"seed", model.config.seed}};
  doc["num_documents"] = model.num_documents;
  doc["vocabulary_size"] = model.vocabulary_size;
  doc["cache_key"] = model.cache_key;
  json topics = json::array();
  for (const Topic& topic : model.topics) {
    json terms = json::array();
    for (const TermWeight& entry : topic_vector(topic, saved_terms)) {
      terms.push_back(json::array({entry.term, entry.weight}));
    }
    topics.push_back({{"floor", topic.smoothing_floor()}, {"terms", std::move(terms)}});
  }
  doc["topics"] = std::move(topics);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file: " + path);
  // nlohmann writes doubles with round-trip precision (up to 17 digits).
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("failed writing model file: " + path);
}

TopicModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read model file: " + path);
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) throw FormatError("corrupt model file: " + path);
  if (doc.value("format", std::string()) != kFormat) {
    throw FormatError("not a topic model file: " + path);
  }
  if (doc.value("version", -1) != kVersion) {
    throw FormatError("unsupported model version in " + path);
  }
  if (!doc.contains("topics") || !doc["topics"].is_array()) {
    throw FormatError("model file lacks `topics`: " + path);
  }
  if (!doc.contains("config") || !doc["config"].is_object()) {
    throw FormatError("model file lacks `config`: " + path);
  }

  TopicModel model;
  try {
    const json& window = doc.at("window");
    model.window = {window.at("start").get<int>(), window.at("end").get<int>(),
                    window.at("id").get<std::string>()};
    const json& config = doc["config"];
    model.config.num_topics = config.at("num_topics").get<int>();
    model.config.alpha = config.at("alpha").get<double>();
    model.config.beta = config.at("beta").get<double>();
    model.config.iterations = config.at("iterations").get<int>();
    model.config.seed = config.at("seed").get<std::uint64_t>();
    model.num_documents = doc.value("num_documents", std::size_t{0});
    model.vocabulary_size = doc.value("vocabulary_size", std::size_t{0});
    model.cache_key = doc.value("cache_key", std::string());
    for (const json& topic : doc["topics"]) {
      SparseVector terms;
      for (const json& entry : topic.at("terms")) {
        terms.push_back({entry.at(0).get<std::string>(), entry.at(1).get<double>()});
      }
      model.topics.push_back(Topic::from_terms(terms, topic.value("floor", 0.0)));
    }
  } catch (const json::exception& e) {
    throw FormatError("corrupt model file " + path + ": " + e.what());
  }
  if (model.topics.size() != static_cast<std::size_t>(model.config.num_topics)) {
    throw FormatError("model file topic count disagrees with config: " + path);
  }
  return model;
}

}  // namespace topicdyn
