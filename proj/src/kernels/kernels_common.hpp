#pragma once

#include <stdexcept>

#include "inekf_drs/kernels.hpp"

namespace inekf_drs::kernels::detail {

inline void check_dim(int n) {
  if (n <= 0 || n > kMaxKernelDim) throw std::invalid_argument("kernel dimension out of range");
}

// out = sym(P + dt * (M + M^T + Q)) where M = A P.
inline void riccati_combine(const double* M, const double* P, const double* Q, double dt, int n,
                            double* out) {
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      const double a = P[i + j * n] + dt * (M[i + j * n] + M[j + i * n] + Q[i + j * n]);
      const double b = P[j + i * n] + dt * (M[j + i * n] + M[i + j * n] + Q[j + i * n]);
      const double s = 0.5 * (a + b);
      out[i + j * n] = s;
      out[j + i * n] = s;
    }
  }
}

inline void symmetrize_in_place(double* X, int n) {
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      const double s = 0.5 * (X[i + j * n] + X[j + i * n]);
      X[i + j * n] = s;
      X[j + i * n] = s;
    }
  }
}

}  // namespace inekf_drs::kernels::detail
