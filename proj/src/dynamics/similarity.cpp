#include <algorithm>
#include <cmath>
#include <iostream>
#include <unordered_map>

#include "topicdyn/dynamics.hpp"
#include "topicdyn/error.hpp"
#include "topicdyn/simd.hpp"

namespace topicdyn {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols) throw InvalidArgument("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.cells.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

namespace {

std::vector<std::string> default_labels(std::string_view prefix, std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return labels;
}

void check_unit_interval(const Matrix& values) {
  for (const double v : values.cells) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("similarity cells must lie in [0, 1]");
  }
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Topic vectors laid out densely over the union of their supports.
struct DenseTopics {
  std::size_t dim = 0;
  std::vector<double> rows;  // n x dim
  std::vector<double> norms;
};

DenseTopics densify(const std::vector<const Topic*>& topics, std::size_t top_terms) {
  std::vector<SparseVector> vectors;
  vectors.reserve(topics.size());
  std::unordered_map<std::string, std::size_t> index;
  for (const Topic* topic : topics) {
    vectors.push_back(topic_vector(*topic, top_terms));
    for (const TermWeight& entry : vectors.back()) index.emplace(entry.term, index.size());
  }
  DenseTopics dense;
  dense.dim = index.size();
  dense.rows.assign(topics.size() * dense.dim, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (const TermWeight& entry : vectors[i]) {
      dense.rows[i * dense.dim + index.at(entry.term)] += entry.weight;
    }
  }
  const auto& k = simd::kernels();
  dense.norms.resize(topics.size());
  for (std::size_t i = 0; i < topics.size(); ++i) {
    const double* row = dense.rows.data() + i * dense.dim;
    dense.norms[i] = std::sqrt(k.dot(row, row, dense.dim));
  }
  return dense;
}

double dense_cosine(const DenseTopics& dense, std::size_t i, std::size_t j) {
  const double ni = dense.norms[i];
  const double nj = dense.norms[j];
  if (ni == 0.0 && nj == 0.0) {
    std::clog << "warning: undefined similarity between two empty topic vectors, using 0\n";
    return 0.0;
  }
  if (ni == 0.0 || nj == 0.0) return 0.0;
  const double d = simd::kernels().dot(dense.rows.data() + i * dense.dim,
                                       dense.rows.data() + j * dense.dim, dense.dim);
  return clamp_unit(d / (ni * nj));
}

}  // namespace

SimilarityMatrix SimilarityMatrix::cross(Matrix values) {
  check_unit_interval(values);
  SimilarityMatrix s;
  s.row_labels = default_labels("t:", values.rows);
  s.col_labels = default_labels("t+1:", values.cols);
  s.values = std::move(values);
  s.kind = SimilarityKind::kCrossWindow;
  return s;
}

SimilarityMatrix SimilarityMatrix::within(Matrix values) {
  check_unit_interval(values);
  if (values.rows != values.cols) throw InvalidArgument("within-window similarity must be square");
  SimilarityMatrix s;
  s.row_labels = default_labels("t:", values.rows);
  s.col_labels = s.row_labels;
  s.values = std::move(values);
  s.kind = SimilarityKind::kWithinWindow;
  return s;
}

double cosine_similarity(const SparseVector& u, const SparseVector& v) {
  auto by_term = [](const TermWeight& a, const TermWeight& b) { return a.term < b.term; };
  SparseVector a = u;
  SparseVector b = v;
  std::sort(a.begin(), a.end(), by_term);
  std::sort(b.begin(), b.end(), by_term);
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (const TermWeight& e : a) norm_a += e.weight * e.weight;
  for (const TermWeight& e : b) norm_b += e.weight * e.weight;
  if (norm_a == 0.0 && norm_b == 0.0) throw InvalidArgument("undefined similarity: both vectors are zero");
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;

  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].term < b[j].term) {
      ++i;
    } else if (b[j].term < a[i].term) {
      ++j;
    } else {
      dot += a[i].weight * b[j].weight;
      ++i;
      ++j;
    }
  }
  return clamp_unit(dot / (std::sqrt(norm_a) * std::sqrt(norm_b)));
}

SimilarityMatrix cross_window_similarity(const std::vector<Topic>& topics_t,
                                         const std::vector<Topic>& topics_t1,
                                         std::size_t top_terms) {
  if (topics_t.empty() || topics_t1.empty()) {
    throw InvalidArgument("cross-window similarity needs topics on both sides");
  }
  std::vector<const Topic*> all;
  for (const Topic& t : topics_t) all.push_back(&t);
  for (const Topic& t : topics_t1) all.push_back(&t);
  const DenseTopics dense = densify(all, top_terms);

  const std::size_t m = topics_t.size();
  Matrix values(m, topics_t1.size());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < topics_t1.size(); ++j) values(i, j) = dense_cosine(dense, i, m + j);
  }
  return SimilarityMatrix::cross(std::move(values));
}

SimilarityMatrix within_window_similarity(const std::vector<Topic>& topics, std::size_t top_terms) {
  if (topics.empty()) throw InvalidArgument("within-window similarity needs at least one topic");
  std::vector<const Topic*> all;
  for (const Topic& t : topics) all.push_back(&t);
  const DenseTopics dense = densify(all, top_terms);

  const std::size_t n = topics.size();
  Matrix values(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    values(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c = dense_cosine(dense, i, j);
      values(i, j) = c;
      values(j, i) = c;
    }
  }
  return SimilarityMatrix::within(std::move(values));
}

}  // namespace topicdyn
