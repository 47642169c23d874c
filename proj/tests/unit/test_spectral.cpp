#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles/jacobi.hpp"
#include "witten/error.hpp"
#include "witten/simplicial.hpp"
#include "witten/spectral.hpp"

using namespace witten;

namespace {

std::vector<Entry> periodic_laplacian(int n, double scale = 1.0) {
  std::vector<Entry> e;
  for (int i = 0; i < n; ++i) {
    e.emplace_back(i, i, 2.0 * scale);
    e.emplace_back(i, (i + 1) % n, -scale);
    e.emplace_back((i + 1) % n, i, -scale);
  }
  return e;
}

oracle::Dense to_oracle(const SparseSymOperator& op) {
  const Eigen::MatrixXd m = op.to_dense();
  oracle::Dense d(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

SparseSymOperator random_operator(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<Entry> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, i, 3.0 * u(rng));
  for (int k = 0; k < 3 * n; ++k) {
    const int i = pick(rng), j = pick(rng);
    const double v = u(rng);
    e.emplace_back(i, j, v);
    e.emplace_back(j, i, v);
  }
  return SparseSymOperator::assemble(e, n);
}

}  // namespace

TEST(Assemble, ScalarCase) {
  const std::vector<Entry> e = {{0, 0, 2.0}};
  const auto op = SparseSymOperator::assemble(e, 1);
  EXPECT_EQ(op.dim(), 1);
  EXPECT_DOUBLE_EQ(all_eigenvalues(op)[0], 2.0);
}

TEST(Assemble, TwoByTwo) {
  const std::vector<Entry> e = {{0, 1, 1.0}, {1, 0, 1.0}};
  const auto ev = all_eigenvalues(SparseSymOperator::assemble(e, 2));
  EXPECT_NEAR(ev[0], -1.0, 1e-14);
  EXPECT_NEAR(ev[1], 1.0, 1e-14);
}

TEST(Assemble, PeriodicGraphLaplacianMatchesOracle) {
  const auto op = SparseSymOperator::assemble(periodic_laplacian(4), 4);
  const auto want = oracle::jacobi_eigenvalues(to_oracle(op));
  const auto got = all_eigenvalues(op);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
}

TEST(Assemble, DuplicatesAreSummed) {
  const std::vector<Entry> e = {{0, 0, 1.0}, {0, 0, 2.5}};
  EXPECT_DOUBLE_EQ(SparseSymOperator::assemble(e, 1).matrix().coeff(0, 0), 3.5);
}

TEST(Assemble, RejectsAsymmetricAndOutOfRange) {
  const std::vector<Entry> asym = {{0, 1, 1.0}};
  const std::vector<Entry> oob = {{0, 3, 1.0}, {3, 0, 1.0}};
  try {
    SparseSymOperator::assemble(asym, 2);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::AsymmetricInput);
  }
  try {
    SparseSymOperator::assemble(oob, 2);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(SmallestEigs, Diagonal) {
  const std::vector<Entry> e = {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0}};
  SpectrumRequest req;
  req.k = 2;
  const auto r = smallest_eigs(SparseSymOperator::assemble(e, 3), req);
  ASSERT_EQ(r.eigenvalues.size(), 2u);
  EXPECT_NEAR(r.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(r.eigenvalues[1], 2.0, 1e-12);
}

TEST(SmallestEigs, PeriodicLaplacianClosedForm) {
  const int n = 64;
  const double h = 2.0 * std::numbers::pi / n;
  const auto op = SparseSymOperator::assemble(periodic_laplacian(n, 1.0 / (h * h)), n);
  SpectrumRequest req;
  req.k = 3;
  const auto r = smallest_eigs(op, req);
  const double lam = 2.0 / (h * h) * (1.0 - std::cos(2.0 * std::numbers::pi / n));
  EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-9 * op.norm_bound());
  EXPECT_NEAR(r.eigenvalues[1], lam, 1e-9 * op.norm_bound());
  EXPECT_NEAR(r.eigenvalues[2], lam, 1e-9 * op.norm_bound());
}

TEST(SmallestEigs, ShiftInvertOnLargeOperator) {
  const int n = 2048;
  const auto op = SparseSymOperator::assemble(periodic_laplacian(n), n);
  SpectrumRequest req;
  req.k = 5;
  req.mode = SolverMode::ShiftInvert;
  const auto r = smallest_eigs(op, req);
  for (int j = 0; j < 5; ++j) {
    const int m = (j + 1) / 2;
    EXPECT_NEAR(r.eigenvalues[j], 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * m / n)), 1e-10);
  }
}

TEST(SmallestEigs, OctahedronConstantsInKernel) {
  const auto oct = generate("octahedron");
  const auto op = hodge_laplacian(oct, combinatorial_stars(oct), 0);
  SpectrumRequest req;
  req.k = 1;
  EXPECT_NEAR(smallest_eigs(op, req).eigenvalues[0], 0.0, 1e-10);
}

TEST(SmallestEigs, InvalidRequests) {
  const auto op = SparseSymOperator::assemble(periodic_laplacian(6), 6);
  SpectrumRequest req;
  req.k = 6;
  EXPECT_THROW(smallest_eigs(op, req), Error);
  req.k = 2;
  req.tol = 0.0;
  EXPECT_THROW(smallest_eigs(op, req), Error);
}

TEST(SmallestEigs, MatchesJacobiOracleOnRandomOperators) {
  std::mt19937_64 rng(20261018);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 20 + static_cast<int>(rng() % 180);
    const auto op = random_operator(rng, n);
    SpectrumRequest req;
    req.k = 6;
    req.mode = SolverMode::ShiftFree;
    req.seed = rng();
    const auto got = smallest_eigs(op, req).eigenvalues;
    const auto want = oracle::jacobi_eigenvalues(to_oracle(op));
    for (int j = 0; j < req.k; ++j) EXPECT_NEAR(got[j], want[j], 1e-8) << "n=" << n << " j=" << j;
  }
}

TEST(SmallestEigs, BitStableForFixedSeed) {
  std::mt19937_64 rng(7);
  const auto op = random_operator(rng, 150);
  SpectrumRequest req;
  req.k = 4;
  req.seed = 99;
  const auto a = smallest_eigs(op, req).eigenvalues;
  const auto b = smallest_eigs(op, req).eigenvalues;
  EXPECT_EQ(a, b);
}

TEST(KernelDimension, DiagonalExample) {
  const std::vector<Entry> e = {{0, 0, 0.0}, {1, 1, 0.0}, {2, 2, 5.0}};
  EXPECT_EQ(kernel_dimension(SparseSymOperator::assemble(e, 3)), 2);
}

TEST(KernelDimension, HodgeExamples) {
  const auto oct = generate("octahedron");
  EXPECT_EQ(kernel_dimension(hodge_laplacian(oct, combinatorial_stars(oct), 1)), 0);
  const auto torus = generate("torus_grid", {0, 16, 16});
  EXPECT_EQ(kernel_dimension(hodge_laplacian(torus, combinatorial_stars(torus), 1)), 2);
}

TEST(KernelDimension, ScaleInvariant) {
  const auto torus = generate("torus_grid", {0, 8, 8});
  const auto op = hodge_laplacian(torus, combinatorial_stars(torus), 1);
  for (double s : {1e-6, 1e-3, 1.0, 7.5, 1e4, 1e8}) EXPECT_EQ(kernel_dimension(op.scaled(s)), 2) << s;
}

TEST(KernelDimension, NegativeSpectrumRejected) {
  const std::vector<Entry> e = {{0, 0, -1.0}, {1, 1, 1.0}};
  try {
    kernel_dimension(SparseSymOperator::assemble(e, 2));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NegativeSpectrum);
  }
}

TEST(ClassifyKernel, GapRule) {
  const std::vector<double> clear = {1e-17, 2e-17, 0.5, 1.0};
  EXPECT_EQ(classify_kernel(clear, 1.0), 2);
  const std::vector<double> none = {0.1, 0.5};
  EXPECT_EQ(classify_kernel(none, 1.0), 0);
  const std::vector<double> all_zero = {0.0, 0.0};
  EXPECT_FALSE(classify_kernel(all_zero, 1.0).has_value());
}
