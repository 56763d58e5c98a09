#pragma once

// Dense covariance kernels used by the filter. All matrices are square, n x n,
// column-major, with n <= kMaxKernelDim. Outputs may not alias inputs.

namespace inekf_drs::kernels {

inline constexpr int kMaxKernelDim = 32;

enum class Isa { kScalar, kAvx2 };

/// Best instruction set supported by this CPU and build. The environment
/// variable INEKF_DRS_KERNELS=scalar forces the scalar path.
Isa active_isa();
const char* isa_name(Isa isa);
bool avx2_available();

/// out = sym(P + dt * (A P + P A^T + Q))
void riccati_step(const double* A, const double* P, const double* Q, double dt, int n, double* out);

/// out = sym(Phi P Phi^T + dt * Q)
void transition_step(const double* Phi, const double* P, const double* Q, double dt, int n, double* out);

/// out = sym(B C B^T)
void congruence(const double* B, const double* C, int n, double* out);

namespace scalar {
void gemm(const double* A, const double* B, int n, double* out);
void gemm_nt(const double* A, const double* B, int n, double* out);
void riccati_step(const double* A, const double* P, const double* Q, double dt, int n, double* out);
void transition_step(const double* Phi, const double* P, const double* Q, double dt, int n, double* out);
void congruence(const double* B, const double* C, int n, double* out);
}  // namespace scalar

namespace avx2 {
void gemm(const double* A, const double* B, int n, double* out);
void gemm_nt(const double* A, const double* B, int n, double* out);
void riccati_step(const double* A, const double* P, const double* Q, double dt, int n, double* out);
void transition_step(const double* Phi, const double* P, const double* Q, double dt, int n, double* out);
void congruence(const double* B, const double* C, int n, double* out);
}  // namespace avx2

}  // namespace inekf_drs::kernels
