#include "topicdyn/simd.hpp"

namespace topicdyn::simd::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void gibbs_weights_scalar(const GibbsTerms& terms, double* out, std::size_t num_topics) {
  for (std::size_t k = 0; k < num_topics; ++k) {
    const double doc = static_cast<double>(terms.doc_topic[k]) + terms.alpha;
    const double word = static_cast<double>(terms.word_topic[k]) + terms.beta;
    const double total = static_cast<double>(terms.topic_total[k]) + terms.vocab_beta;
    out[k] = doc * word / total;
  }
}

}  // namespace topicdyn::simd::detail
