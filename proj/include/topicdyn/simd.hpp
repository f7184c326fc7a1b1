#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

// Data-parallel inner loops. Every kernel has a portable scalar reference and
// optional vector variants; the best one supported by the host is selected at
// startup and may be overridden with TOPICDYN_ISA=scalar|avx2.
namespace topicdyn::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

struct GibbsTerms {
  const std::int32_t* doc_topic;   // n_dk for the current document, length K
  const std::int32_t* word_topic;  // n_wk for the current word, length K
  const std::int32_t* topic_total; // n_k, length K
  double alpha;
  double beta;
  double vocab_beta;  // V * beta
};

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[k] = (n_dk + alpha) * (n_wk + beta) / (n_k + V*beta), k in [0, K).
  // Elementwise only, so every variant is bit-identical to the scalar one.
  void (*gibbs_weights)(const GibbsTerms& terms, double* out, std::size_t num_topics);
};

bool isa_supported(Isa isa);
/// Kernels for a specific ISA. Throws InvalidArgument if unsupported here.
const KernelTable& kernels_for(Isa isa);
/// Kernels currently selected for this process.
const KernelTable& kernels();
Isa active_isa();
/// Switch the process-wide selection. Not synchronized with running kernels.
void set_isa(Isa isa);
std::vector<Isa> supported_isas();

double dot(std::span<const double> a, std::span<const double> b);

/// Row-major `rows x dim` input; writes the symmetric `rows x rows` matrix
/// out[i*rows + j] = <row i, row j>. Each pair is computed once and mirrored.
void gram(std::span<const double> matrix, std::size_t rows, std::size_t dim, std::span<double> out);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
void gibbs_weights_scalar(const GibbsTerms& terms, double* out, std::size_t num_topics);
#if defined(TOPICDYN_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void gibbs_weights_avx2(const GibbsTerms& terms, double* out, std::size_t num_topics);
#endif
}  // namespace detail

}  // namespace topicdyn::simd
