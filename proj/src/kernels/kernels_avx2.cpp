// Compiled with -mavx2 -mfma; only reached through runtime dispatch.
#include <immintrin.h>

#include <cmath>

#include "kernels_common.hpp"

namespace inekf_drs::kernels::avx2 {

namespace {

// c[0..n) += a[0..n) * b
inline void axpy(const double* a, double b, int n, double* c) {
  const __m256d vb = _mm256_set1_pd(b);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vc = _mm256_loadu_pd(c + i);
    vc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), vb, vc);
    _mm256_storeu_pd(c + i, vc);
  }
  for (; i < n; ++i) c[i] = std::fma(a[i], b, c[i]);
}

}  // namespace

void gemm(const double* A, const double* B, int n, double* out) {
  for (int j = 0; j < n; ++j) {
    double* c = out + j * n;
    for (int i = 0; i < n; ++i) c[i] = 0.0;
    for (int k = 0; k < n; ++k) axpy(A + k * n, B[k + j * n], n, c);
  }
}

void gemm_nt(const double* A, const double* B, int n, double* out) {
  for (int j = 0; j < n; ++j) {
    double* c = out + j * n;
    for (int i = 0; i < n; ++i) c[i] = 0.0;
    for (int k = 0; k < n; ++k) axpy(A + k * n, B[j + k * n], n, c);
  }
}

void riccati_step(const double* A, const double* P, const double* Q, double dt, int n, double* out) {
  detail::check_dim(n);
  alignas(32) double M[kMaxKernelDim * kMaxKernelDim];
  gemm(A, P, n, M);
  detail::riccati_combine(M, P, Q, dt, n, out);
}

void transition_step(const double* Phi, const double* P, const double* Q, double dt, int n, double* out) {
  detail::check_dim(n);
  alignas(32) double T[kMaxKernelDim * kMaxKernelDim];
  gemm(Phi, P, n, T);
  gemm_nt(T, Phi, n, out);
  for (int i = 0; i < n * n; ++i) out[i] += dt * Q[i];
  detail::symmetrize_in_place(out, n);
}

void congruence(const double* B, const double* C, int n, double* out) {
  detail::check_dim(n);
  alignas(32) double T[kMaxKernelDim * kMaxKernelDim];
  gemm(B, C, n, T);
  gemm_nt(T, B, n, out);
  detail::symmetrize_in_place(out, n);
}

}  // namespace inekf_drs::kernels::avx2
