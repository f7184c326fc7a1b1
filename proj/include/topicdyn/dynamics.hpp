#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "topicdyn/lda.hpp"

namespace topicdyn {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> cells;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), cells(r * c, fill) {}
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  double& operator()(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
  Matrix transposed() const;
  bool operator==(const Matrix&) const = default;
};

enum class SimilarityKind { kCrossWindow, kWithinWindow };

/// Cosine similarities between topics. Cross-window (S) is M x N with rows at
/// time t and columns at t+1; within-window (Q) is square, symmetric, with a
/// unit diagonal.
struct SimilarityMatrix {
  Matrix values;
  SimilarityKind kind = SimilarityKind::kCrossWindow;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  std::size_t rows() const { return values.rows; }
  std::size_t cols() const { return values.cols; }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }

  /// Cross-window matrix with default labels; cells must lie in [0, 1].
  static SimilarityMatrix cross(Matrix values);
  static SimilarityMatrix within(Matrix values);
};

enum class ProjectionStage { kRaw, kCorrected, kNormalized };

/// Square 1-mode projection of the bipartite topic network.
struct ProjectionMatrix {
  Matrix values;
  ProjectionStage stage = ProjectionStage::kRaw;
  bool zero_mass = false;  // set by normalize_triangle when there is no mass

  std::size_t dim() const { return values.rows; }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
};

enum class CorrectionMode { kNone, kDivideRawQ, kDivideQSquared };

std::string_view to_string(CorrectionMode mode);
CorrectionMode parse_correction_mode(std::string_view text);

struct CorrectionOptions {
  CorrectionMode mode = CorrectionMode::kDivideRawQ;
  // divide-Q-squared only: compute (Q Q^T) / P instead of P / (Q Q^T), the
  // literal reading of the published pseudo-code.
  bool swap_operands = false;
  double epsilon = 1e-9;
};

/// dot(u, v) / (|u| |v|) over the union of supports. Throws InvalidArgument
/// when both vectors are zero; 0 when exactly one is.
double cosine_similarity(const SparseVector& u, const SparseVector& v);

SimilarityMatrix cross_window_similarity(const std::vector<Topic>& topics_t,
                                         const std::vector<Topic>& topics_t1,
                                         std::size_t top_terms = 100);
SimilarityMatrix within_window_similarity(const std::vector<Topic>& topics,
                                          std::size_t top_terms = 100);

/// P = S S^T (M x M).
ProjectionMatrix project_merging(const SimilarityMatrix& s);
/// P = S^T S (N x N).
ProjectionMatrix project_splitting(const SimilarityMatrix& s);

/// Discounts projection mass already explained by within-window similarity.
/// `q_side` is Q at time t for merging and at t+1 for splitting.
ProjectionMatrix conditional_correct(const ProjectionMatrix& p, const SimilarityMatrix& q_side,
                                     const CorrectionOptions& options = {});

/// Scales P so that the diagonal plus the lower triangle sum to one.
/// Zero total mass leaves P unchanged and sets zero_mass.
ProjectionMatrix normalize_triangle(const ProjectionMatrix& p);

/// 1 - trace of the normalized merging projection; 0 on zero mass.
double merging_index(const ProjectionMatrix& normalized);
/// 1 - trace of the normalized splitting projection; 0 on zero mass.
double splitting_index(const ProjectionMatrix& normalized);

/// NI_j = 1 - (column j sum) / M.
std::vector<double> novelty_per_topic(const SimilarityMatrix& s);
/// NI = 1 - mean(S).
double novelty_index(const SimilarityMatrix& s);

struct BirthsDeaths {
  int births = 0;
  int deaths = 0;
  bool operator==(const BirthsDeaths&) const = default;
};

/// A death per row and a birth per column whose cells are all <= tau.
BirthsDeaths count_births_deaths(const SimilarityMatrix& s, double tau = 0.0);

enum class TransitionLabel { kStability, kMerging, kSplitting, kMergingSplitting, kBirth, kDeath };

std::string_view to_string(TransitionLabel label);

struct Transition {
  int from = -1;  // topic at t, -1 for a birth
  int to = -1;    // topic at t+1, -1 for a death
  double weight = 0.0;
  TransitionLabel label = TransitionLabel::kStability;
  bool operator==(const Transition&) const = default;
};

/// Thresholds S at tau (edges are cells > tau) and labels the result: edges
/// into a node of in-degree >= 2 are merging, edges out of a node of
/// out-degree >= 2 are splitting, remaining edges stability; isolated t+1
/// nodes become births and isolated t nodes deaths.
std::vector<Transition> classify_transitions(const SimilarityMatrix& s, double tau);

/// [[0, S], [S^T, 0]], dimension M + N.
Matrix build_bi_adjacency(const SimilarityMatrix& s);

struct DynamicsOptions {
  std::size_t top_terms = 100;
  CorrectionOptions correction;
  double tau = 0.05;
};

struct WindowPairReport {
  WindowInfo from;
  WindowInfo to;
  double merging_index = 0.0;
  double splitting_index = 0.0;
  double novelty_index = 0.0;
  std::vector<double> per_topic_novelty;
  int births = 0;
  int deaths = 0;
  std::vector<Transition> transitions;
  bool merging_zero_mass = false;
  bool splitting_zero_mass = false;
  SimilarityMatrix similarity;  // S
  ProjectionMatrix merging_projection;    // normalized, M x M
  ProjectionMatrix splitting_projection;  // normalized, N x N

  /// Transition label "<from.start>-<to.end>", e.g. 1900-1920.
  std::string label() const;
};

WindowPairReport compute_window_pair(const TopicModel& model_t, const TopicModel& model_t1,
                                     const DynamicsOptions& options = {});

WindowPairReport compute_window_pair(const TimeWindow& window_t, const TimeWindow& window_t1,
                                     const LdaConfig& config_t, const LdaConfig& config_t1,
                                     const DynamicsOptions& options = {});

}  // namespace topicdyn
