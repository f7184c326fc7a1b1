// Compiled with -mavx2 only. FMA stays disabled so that products and sums
// round exactly like the scalar reference.
#include <immintrin.h>

#include "topicdyn/simd.hpp"

namespace topicdyn::simd::detail {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    acc2 = _mm256_add_pd(acc2,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8)));
    acc3 = _mm256_add_pd(acc3,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  const __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
  const __m128d low = _mm256_castpd256_pd128(acc);
  const __m128d high = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(low, high);
  double sum = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void gibbs_weights_avx2(const GibbsTerms& terms, double* out, std::size_t num_topics) {
  const __m256d alpha = _mm256_set1_pd(terms.alpha);
  const __m256d beta = _mm256_set1_pd(terms.beta);
  const __m256d vocab_beta = _mm256_set1_pd(terms.vocab_beta);
  std::size_t k = 0;
  for (; k + 4 <= num_topics; k += 4) {
    const auto load = [k](const std::int32_t* p) {
      return _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p + k)));
    };
    const __m256d doc = _mm256_add_pd(load(terms.doc_topic), alpha);
    const __m256d word = _mm256_add_pd(load(terms.word_topic), beta);
    const __m256d total = _mm256_add_pd(load(terms.topic_total), vocab_beta);
    _mm256_storeu_pd(out + k, _mm256_div_pd(_mm256_mul_pd(doc, word), total));
  }
  for (; k < num_topics; ++k) {
    const double doc = static_cast<double>(terms.doc_topic[k]) + terms.alpha;
    const double word = static_cast<double>(terms.word_topic[k]) + terms.beta;
    const double total = static_cast<double>(terms.topic_total[k]) + terms.vocab_beta;
    out[k] = doc * word / total;
  }
}

}  // namespace topicdyn::simd::detail
