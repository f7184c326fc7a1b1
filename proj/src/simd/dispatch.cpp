#include <atomic>
#include <cstdlib>
#include <string>

#include "topicdyn/error.hpp"
#include "topicdyn/simd.hpp"

namespace topicdyn::simd {
namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, &detail::dot_scalar,
                                   &detail::gibbs_weights_scalar};
#if defined(TOPICDYN_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::kAvx2, &detail::dot_avx2, &detail::gibbs_weights_avx2};
#endif

bool host_has_avx2() {
#if defined(TOPICDYN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  if (const char* forced = std::getenv("TOPICDYN_ISA")) {
    const std::string name(forced);
    if (name == "scalar") return &kScalarTable;
#if defined(TOPICDYN_HAVE_AVX2)
    if (name == "avx2" && host_has_avx2()) return &kAvx2Table;
#endif
  }
#if defined(TOPICDYN_HAVE_AVX2)
  if (host_has_avx2()) return &kAvx2Table;
#endif
  return &kScalarTable;
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return host_has_avx2();
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw InvalidArgument("instruction set not supported on this host: " +
                          std::string(to_string(isa)));
  }
#if defined(TOPICDYN_HAVE_AVX2)
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

Isa active_isa() { return kernels().isa; }

void set_isa(Isa isa) { active().store(&kernels_for(isa), std::memory_order_relaxed); }

std::vector<Isa> supported_isas() {
  std::vector<Isa> isas{Isa::kScalar};
  if (isa_supported(Isa::kAvx2)) isas.push_back(Isa::kAvx2);
  return isas;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
  return kernels().dot(a.data(), b.data(), a.size());
}

void gram(std::span<const double> matrix, std::size_t rows, std::size_t dim,
          std::span<double> out) {
  if (matrix.size() != rows * dim || out.size() != rows * rows) {
    throw InvalidArgument("gram: shape mismatch");
  }
  const KernelTable& table = kernels();
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row_i = matrix.data() + i * dim;
    for (std::size_t j = 0; j <= i; ++j) {
      const double value = table.dot(row_i, matrix.data() + j * dim, dim);
      out[i * rows + j] = value;
      out[j * rows + i] = value;
    }
  }
}

}  // namespace topicdyn::simd
