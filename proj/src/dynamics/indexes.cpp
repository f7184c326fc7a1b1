#include <algorithm>

#include "topicdyn/dynamics.hpp"
#include "topicdyn/error.hpp"
#include "topicdyn/simd.hpp"

namespace topicdyn {

std::string_view to_string(CorrectionMode mode) {
  switch (mode) {
    case CorrectionMode::kNone:
      return "none";
    case CorrectionMode::kDivideRawQ:
      return "divide-raw-Q";
    case CorrectionMode::kDivideQSquared:
      return "divide-Q-squared";
  }
  return "unknown";
}

CorrectionMode parse_correction_mode(std::string_view text) {
  if (text == "none") return CorrectionMode::kNone;
  if (text == "divide-raw-Q") return CorrectionMode::kDivideRawQ;
  if (text == "divide-Q-squared") return CorrectionMode::kDivideQSquared;
  throw InvalidArgument("unknown correction mode: " + std::string(text));
}

namespace {

Matrix gram_of_rows(const Matrix& m) {
  Matrix out(m.rows, m.rows);
  simd::gram(m.cells, m.rows, m.cols, out.cells);
  return out;
}

void require_cross(const SimilarityMatrix& s) {
  if (s.kind != SimilarityKind::kCrossWindow) {
    throw InvalidArgument("expected a cross-window similarity matrix");
  }
}

double off_diagonal_mass(const ProjectionMatrix& normalized) {
  if (normalized.stage != ProjectionStage::kNormalized) {
    throw InvalidArgument("index requires a normalized projection");
  }
  if (normalized.zero_mass) return 0.0;
  // Diagonal plus lower triangle sum to one, so 1 - trace equals the strictly
  // lower mass. Summing that directly avoids cancellation.
  double lower = 0.0;
  for (std::size_t i = 1; i < normalized.dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j) lower += normalized(i, j);
  }
  return std::clamp(lower, 0.0, 1.0);
}

}  // namespace

ProjectionMatrix project_merging(const SimilarityMatrix& s) {
  require_cross(s);
  return ProjectionMatrix{gram_of_rows(s.values), ProjectionStage::kRaw, false};
}

ProjectionMatrix project_splitting(const SimilarityMatrix& s) {
  require_cross(s);
  return ProjectionMatrix{gram_of_rows(s.values.transposed()), ProjectionStage::kRaw, false};
}

ProjectionMatrix conditional_correct(const ProjectionMatrix& p, const SimilarityMatrix& q_side,
                                     const CorrectionOptions& options) {
  const std::size_t n = p.dim();
  if (q_side.rows() != n || q_side.cols() != n) {
    throw InvalidArgument("conditional correction: Q is " + std::to_string(q_side.rows()) + "x" +
                          std::to_string(q_side.cols()) + " but P is " + std::to_string(n) + "x" +
                          std::to_string(n));
  }
  ProjectionMatrix r{p.values, ProjectionStage::kCorrected, false};
  const double eps = options.epsilon;
  switch (options.mode) {
    case CorrectionMode::kNone:
      break;
    case CorrectionMode::kDivideRawQ:
      for (std::size_t i = 0; i < n * n; ++i) {
        r.values.cells[i] = p.values.cells[i] / std::max(q_side.values.cells[i], eps);
      }
      break;
    case CorrectionMode::kDivideQSquared: {
      const Matrix qq = gram_of_rows(q_side.values);
      for (std::size_t i = 0; i < n * n; ++i) {
        r.values.cells[i] = options.swap_operands
                                ? qq.cells[i] / std::max(p.values.cells[i], eps)
                                : p.values.cells[i] / std::max(qq.cells[i], eps);
      }
      break;
    }
  }
  return r;
}

ProjectionMatrix normalize_triangle(const ProjectionMatrix& p) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) total += p(i, j);
  }
  ProjectionMatrix out{p.values, ProjectionStage::kNormalized, false};
  if (!(total > 0.0)) {
    out.zero_mass = true;
    return out;
  }
  for (double& v : out.values.cells) v /= total;
  return out;
}

double merging_index(const ProjectionMatrix& normalized) { return off_diagonal_mass(normalized); }

double splitting_index(const ProjectionMatrix& normalized) { return off_diagonal_mass(normalized); }

std::vector<double> novelty_per_topic(const SimilarityMatrix& s) {
  require_cross(s);
  const std::size_t m = s.rows();
  std::vector<double> novelty(s.cols(), 1.0);
  if (m == 0) return novelty;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    double column = 0.0;
    for (std::size_t i = 0; i < m; ++i) column += s(i, j);
    novelty[j] = 1.0 - column / static_cast<double>(m);
  }
  return novelty;
}

double novelty_index(const SimilarityMatrix& s) {
  require_cross(s);
  if (s.values.cells.empty()) return 1.0;
  double total = 0.0;
  for (const double v : s.values.cells) total += v;
  return 1.0 - total / static_cast<double>(s.rows() * s.cols());
}

BirthsDeaths count_births_deaths(const SimilarityMatrix& s, double tau) {
  if (tau < 0.0) throw InvalidArgument("birth/death threshold must be >= 0");
  BirthsDeaths out;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    bool dead = true;
    for (std::size_t j = 0; j < s.cols() && dead; ++j) dead = s(i, j) <= tau;
    out.deaths += dead ? 1 : 0;
  }
  for (std::size_t j = 0; j < s.cols(); ++j) {
    bool born = true;
    for (std::size_t i = 0; i < s.rows() && born; ++i) born = s(i, j) <= tau;
    out.births += born ? 1 : 0;
  }
  return out;
}

std::string_view to_string(TransitionLabel label) {
  switch (label) {
    case TransitionLabel::kStability:
      return "stability";
    case TransitionLabel::kMerging:
      return "merging";
    case TransitionLabel::kSplitting:
      return "splitting";
    case TransitionLabel::kMergingSplitting:
      return "merging+splitting";
    case TransitionLabel::kBirth:
      return "birth";
    case TransitionLabel::kDeath:
      return "death";
  }
  return "unknown";
}

std::vector<Transition> classify_transitions(const SimilarityMatrix& s, double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidArgument("transition threshold must lie in [0, 1)");
  const std::size_t m = s.rows();
  const std::size_t n = s.cols();
  std::vector<int> out_degree(m, 0);
  std::vector<int> in_degree(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (s(i, j) > tau) {
        ++out_degree[i];
        ++in_degree[j];
      }
    }
  }

  std::vector<Transition> transitions;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(s(i, j) > tau)) continue;
      const bool merging = in_degree[j] >= 2;
      const bool splitting = out_degree[i] >= 2;
      TransitionLabel label = TransitionLabel::kStability;
      if (merging && splitting) {
        label = TransitionLabel::kMergingSplitting;
      } else if (merging) {
        label = TransitionLabel::kMerging;
      } else if (splitting) {
        label = TransitionLabel::kSplitting;
      }
      transitions.push_back({static_cast<int>(i), static_cast<int>(j), s(i, j), label});
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (in_degree[j] == 0) transitions.push_back({-1, static_cast<int>(j), 0.0, TransitionLabel::kBirth});
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (out_degree[i] == 0) transitions.push_back({static_cast<int>(i), -1, 0.0, TransitionLabel::kDeath});
  }
  return transitions;
}

Matrix build_bi_adjacency(const SimilarityMatrix& s) {
  require_cross(s);
  const std::size_t m = s.rows();
  const std::size_t n = s.cols();
  Matrix d(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d(i, m + j) = s(i, j);
      d(m + j, i) = s(i, j);
    }
  }
  return d;
}

std::string WindowPairReport::label() const {
  return std::to_string(from.start) + "-" + std::to_string(to.end);
}

namespace {

std::vector<std::string> topic_labels(const TopicModel& model, std::string_view fallback) {
  const std::string prefix = model.window.id.empty() ? std::string(fallback) : model.window.id;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < model.topics.size(); ++k) labels.push_back(prefix + ":" + std::to_string(k));
  return labels;
}

}  // namespace

WindowPairReport compute_window_pair(const TopicModel& model_t, const TopicModel& model_t1,
                                     const DynamicsOptions& options) {
  WindowPairReport report;
  report.from = model_t.window;
  report.to = model_t1.window;

  report.similarity = cross_window_similarity(model_t.topics, model_t1.topics, options.top_terms);
  report.similarity.row_labels = topic_labels(model_t, "t");
  report.similarity.col_labels = topic_labels(model_t1, "t+1");
  const SimilarityMatrix q_t = within_window_similarity(model_t.topics, options.top_terms);
  const SimilarityMatrix q_t1 = within_window_similarity(model_t1.topics, options.top_terms);

  const ProjectionMatrix merging = normalize_triangle(
      conditional_correct(project_merging(report.similarity), q_t, options.correction));
  const ProjectionMatrix splitting = normalize_triangle(
      conditional_correct(project_splitting(report.similarity), q_t1, options.correction));

  report.merging_index = merging_index(merging);
  report.splitting_index = splitting_index(splitting);
  report.merging_zero_mass = merging.zero_mass;
  report.splitting_zero_mass = splitting.zero_mass;
  report.novelty_index = novelty_index(report.similarity);
  report.per_topic_novelty = novelty_per_topic(report.similarity);
  const BirthsDeaths turnover = count_births_deaths(report.similarity, options.tau);
  report.merging_projection = merging;
  report.splitting_projection = splitting;
  report.births = turnover.births;
  report.deaths = turnover.deaths;
  report.transitions = classify_transitions(report.similarity, options.tau);
  return report;
}

WindowPairReport compute_window_pair(const TimeWindow& window_t, const TimeWindow& window_t1,
                                     const LdaConfig& config_t, const LdaConfig& config_t1,
                                     const DynamicsOptions& options) {
  const TopicModel model_t = train_lda(window_t, config_t);
  const TopicModel model_t1 = train_lda(window_t1, config_t1);
  return compute_window_pair(model_t, model_t1, options);
}

}  // namespace topicdyn
