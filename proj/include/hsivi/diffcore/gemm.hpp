#pragma once

#include <cstddef>

namespace hsivi::diffcore::detail {

// Dense double-precision GEMM kernels on row-major buffers. Every output
// element is accumulated by exactly one thread in a fixed k-order, so results
// are bit-identical regardless of the thread count.

// C (MxN) += A (MxK) * B (KxN)
void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n);

// C (MxN) += A (MxK) * B^T, with B stored as (NxK)
void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n);

// C (MxN) += A^T * B, with A stored as (KxM), B as (KxN)
void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n);

}  // namespace hsivi::diffcore::detail
