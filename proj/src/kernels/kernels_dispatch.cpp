#include <cstdlib>
#include <cstring>

#include "kernels_common.hpp"

namespace inekf_drs::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(INEKF_DRS_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__)) && defined(__GNUC__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  const char* env = std::getenv("INEKF_DRS_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::kScalar;
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

}  // namespace

bool avx2_available() {
  static const bool available = cpu_has_avx2();
  return available;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

void riccati_step(const double* A, const double* P, const double* Q, double dt, int n, double* out) {
#if defined(INEKF_DRS_HAVE_AVX2_TU)
  if (active_isa() == Isa::kAvx2) {
    avx2::riccati_step(A, P, Q, dt, n, out);
    return;
  }
#endif
  scalar::riccati_step(A, P, Q, dt, n, out);
}

void transition_step(const double* Phi, const double* P, const double* Q, double dt, int n, double* out) {
#if defined(INEKF_DRS_HAVE_AVX2_TU)
  if (active_isa() == Isa::kAvx2) {
    avx2::transition_step(Phi, P, Q, dt, n, out);
    return;
  }
#endif
  scalar::transition_step(Phi, P, Q, dt, n, out);
}

void congruence(const double* B, const double* C, int n, double* out) {
#if defined(INEKF_DRS_HAVE_AVX2_TU)
  if (active_isa() == Isa::kAvx2) {
    avx2::congruence(B, C, n, out);
    return;
  }
#endif
  scalar::congruence(B, C, n, out);
}

}  // namespace inekf_drs::kernels
