#include "kernels_common.hpp"

namespace inekf_drs::kernels::scalar {

void gemm(const double* A, const double* B, int n, double* out) {
  for (int j = 0; j < n; ++j) {
    double* c = out + j * n;
    for (int i = 0; i < n; ++i) c[i] = 0.0;
    for (int k = 0; k < n; ++k) {
      const double b = B[k + j * n];
      const double* a = A + k * n;
      for (int i = 0; i < n; ++i) c[i] += a[i] * b;
    }
  }
}

// out = A B^T
void gemm_nt(const double* A, const double* B, int n, double* out) {
  for (int j = 0; j < n; ++j) {
    double* c = out + j * n;
    for (int i = 0; i < n; ++i) c[i] = 0.0;
    for (int k = 0; k < n; ++k) {
      const double b = B[j + k * n];
      const double* a = A + k * n;
      for (int i = 0; i < n; ++i) c[i] += a[i] * b;
    }
  }
}

void riccati_step(const double* A, const double* P, const double* Q, double dt, int n, double* out) {
  detail::check_dim(n);
  double M[kMaxKernelDim * kMaxKernelDim];
  gemm(A, P, n, M);
  detail::riccati_combine(M, P, Q, dt, n, out);
}

void transition_step(const double* Phi, const double* P, const double* Q, double dt, int n, double* out) {
  detail::check_dim(n);
  double T[kMaxKernelDim * kMaxKernelDim];
  gemm(Phi, P, n, T);
  gemm_nt(T, Phi, n, out);
  for (int i = 0; i < n * n; ++i) out[i] += dt * Q[i];
  detail::symmetrize_in_place(out, n);
}

void congruence(const double* B, const double* C, int n, double* out) {
  detail::check_dim(n);
  double T[kMaxKernelDim * kMaxKernelDim];
  gemm(B, C, n, T);
  gemm_nt(T, B, n, out);
  detail::symmetrize_in_place(out, n);
}

}  // namespace inekf_drs::kernels::scalar
