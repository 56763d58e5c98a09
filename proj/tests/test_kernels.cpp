#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "inekf_drs/kernels.hpp"
#include "test_util.hpp"

namespace inekf_drs::kernels {
namespace {

using Eigen::MatrixXd;

MatrixXd random_matrix(std::mt19937_64& rng, int n) {
  return testing::random_vector(rng, n * n, 1.0).reshaped(n, n);
}

MatrixXd sym(const MatrixXd& M) { return 0.5 * (M + M.transpose()); }

double rel_diff(const MatrixXd& a, const MatrixXd& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

struct Inputs {
  MatrixXd A, P, Q;
  double dt;
};

Inputs make_inputs(std::mt19937_64& rng, int n) {
  Inputs in;
  in.A = random_matrix(rng, n);
  const MatrixXd G = random_matrix(rng, n);
  in.P = G * G.transpose();
  in.Q = sym(random_matrix(rng, n));
  in.dt = 0.005;
  return in;
}

TEST(Kernels, ScalarMatchesEigenOracle) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= kMaxKernelDim; ++n) {
    const Inputs in = make_inputs(rng, n);
    MatrixXd out(n, n);

    scalar::riccati_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, out.data());
    EXPECT_LT(rel_diff(out, sym(in.P + in.dt * (in.A * in.P + in.P * in.A.transpose() + in.Q))), 1e-13) << n;

    scalar::transition_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, out.data());
    EXPECT_LT(rel_diff(out, sym(in.A * in.P * in.A.transpose() + in.dt * in.Q)), 1e-13) << n;

    scalar::congruence(in.A.data(), in.P.data(), n, out.data());
    EXPECT_LT(rel_diff(out, sym(in.A * in.P * in.A.transpose())), 1e-13) << n;

    scalar::gemm(in.A.data(), in.P.data(), n, out.data());
    EXPECT_LT(rel_diff(out, in.A * in.P), 1e-13) << n;

    scalar::gemm_nt(in.A.data(), in.P.data(), n, out.data());
    EXPECT_LT(rel_diff(out, in.A * in.P.transpose()), 1e-13) << n;
  }
}

TEST(Kernels, Avx2MatchesScalar) {
  if (!avx2_available()) GTEST_SKIP() << "AVX2/FMA not available on this CPU or build";
  std::mt19937_64 rng(2);
  for (int n = 1; n <= kMaxKernelDim; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const Inputs in = make_inputs(rng, n);
      MatrixXd ref(n, n);
      MatrixXd out(n, n);

      scalar::riccati_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, ref.data());
      avx2::riccati_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, out.data());
      EXPECT_LE(rel_diff(out, ref), 1e-12) << n;

      scalar::transition_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, ref.data());
      avx2::transition_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, out.data());
      EXPECT_LE(rel_diff(out, ref), 1e-12) << n;

      scalar::congruence(in.A.data(), in.P.data(), n, ref.data());
      avx2::congruence(in.A.data(), in.P.data(), n, out.data());
      EXPECT_LE(rel_diff(out, ref), 1e-12) << n;

      scalar::gemm(in.A.data(), in.P.data(), n, ref.data());
      avx2::gemm(in.A.data(), in.P.data(), n, out.data());
      EXPECT_LE(rel_diff(out, ref), 1e-12) << n;

      scalar::gemm_nt(in.A.data(), in.P.data(), n, ref.data());
      avx2::gemm_nt(in.A.data(), in.P.data(), n, out.data());
      EXPECT_LE(rel_diff(out, ref), 1e-12) << n;
    }
  }
}

TEST(Kernels, OutputsAreExactlySymmetric) {
  std::mt19937_64 rng(3);
  const int n = 18;
  const Inputs in = make_inputs(rng, n);
  MatrixXd out(n, n);
  transition_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, out.data());
  EXPECT_EQ(out, out.transpose());
  riccati_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, out.data());
  EXPECT_EQ(out, out.transpose());
  congruence(in.A.data(), in.P.data(), n, out.data());
  EXPECT_EQ(out, out.transpose());
}

TEST(Kernels, DispatchReportsIsa) {
  const Isa isa = active_isa();
  EXPECT_TRUE(isa == Isa::kScalar || isa == Isa::kAvx2);
  if (isa == Isa::kAvx2) {
    EXPECT_TRUE(avx2_available());
  }
  EXPECT_STREQ(isa_name(Isa::kScalar), "scalar");
  EXPECT_STREQ(isa_name(Isa::kAvx2), "avx2");
}

TEST(Kernels, DispatchedMatchesScalar) {
  std::mt19937_64 rng(4);
  const int n = 18;
  const Inputs in = make_inputs(rng, n);
  MatrixXd ref(n, n);
  MatrixXd out(n, n);
  scalar::transition_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, ref.data());
  transition_step(in.A.data(), in.P.data(), in.Q.data(), in.dt, n, out.data());
  EXPECT_LE(rel_diff(out, ref), 1e-12);
}

}  // namespace
}  // namespace inekf_drs::kernels
