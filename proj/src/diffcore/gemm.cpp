#include "hsivi/diffcore/gemm.hpp"

#include <cstdint>

namespace hsivi::diffcore::detail {

namespace {
// Below this many multiply-adds the OpenMP fork overhead dominates.
constexpr int64_t kParallelCutoff = 1 << 18;
}  // namespace

void gemm_nn(const double* a, const double* b, double* c, int m, int k,
             int n) {
  const int64_t work = static_cast<int64_t>(m) * k * n;
#pragma omp parallel for schedule(static) if (work > kParallelCutoff)
  for (int i = 0; i < m; ++i) {
    double* ci = c + static_cast<size_t>(i) * n;
    const double* ai = a + static_cast<size_t>(i) * k;
    for (int p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = b + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

void gemm_nt(const double* a, const double* b, double* c, int m, int k,
             int n) {
  const int64_t work = static_cast<int64_t>(m) * k * n;
#pragma omp parallel for schedule(static) if (work > kParallelCutoff)
  for (int i = 0; i < m; ++i) {
    const double* ai = a + static_cast<size_t>(i) * k;
    double* ci = c + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* bj = b + static_cast<size_t>(j) * k;
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += ai[p] * bj[p];
      ci[j] += acc;
    }
  }
}

void gemm_tn(const double* a, const double* b, double* c, int m, int k,
             int n) {
  const int64_t work = static_cast<int64_t>(m) * k * n;
#pragma omp parallel for schedule(static) if (work > kParallelCutoff)
  for (int i = 0; i < m; ++i) {
    double* ci = c + static_cast<size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      const double api = a[static_cast<size_t>(p) * m + i];
      const double* bp = b + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += api * bp[j];
    }
  }
}

}  // namespace hsivi::diffcore::detail
