#include <filesystem>

#include "topicdyn/error.hpp"
#include "topicdyn/pipeline.hpp"

namespace topicdyn {

void PipelineConfig::validate() const {
  if (corpus_path.empty()) throw ConfigError("corpus path is required");
  if (!std::filesystem::exists(corpus_path)) throw ConfigError("corpus not found: " + corpus_path);
  if (window_width < 1) throw ConfigError("window width must be >= 1");
  if (start_year && end_year && *start_year >= *end_year) {
    throw ConfigError("start year must precede end year");
  }
  if (dynamics.top_terms < 1) throw ConfigError("top terms must be >= 1");
  if (!(dynamics.tau >= 0.0 && dynamics.tau < 1.0)) throw ConfigError("tau must lie in [0, 1)");
  if (!(dynamics.correction.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (min_documents < 1) throw ConfigError("minimum documents per window must be >= 1");
  if (output_dir.empty()) throw ConfigError("output directory is required");
  if (!stopwords_path.empty() && !std::filesystem::is_regular_file(stopwords_path)) {
    throw ConfigError("stopword list not found: " + stopwords_path);
  }
  try {
    lda.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace topicdyn
