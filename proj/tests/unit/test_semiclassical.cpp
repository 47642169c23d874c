#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "witten/error.hpp"
#include "witten/semiclassical.hpp"

using namespace witten;

namespace {

// All quanta tuples with entries < bound, values Σ ω(2n+1) + g, sorted.
std::vector<double> brute_scalar(const std::vector<WellData>& wells, int bound) {
  std::vector<double> out;
  for (const auto& w : wells) {
    const int n = static_cast<int>(w.omegas.size());
    std::vector<int> q(n, 0);
    while (true) {
      double v = w.offset;
      for (int i = 0; i < n; ++i) v += w.omegas[i] * (2 * q[i] + 1);
      out.push_back(v);
      int i = 0;
      while (i < n && ++q[i] == bound) q[i++] = 0;
      if (i == n) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> brute_form(int n, const std::vector<WellData>& wells, int p, int bound) {
  std::vector<double> out;
  for (const auto& w : wells) {
    for (const auto& I : multi_indices(n, p)) {
      std::vector<int> q(n, 0);
      while (true) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
          const bool in = std::find(I.begin(), I.end(), i + 1) != I.end();
          v += std::abs(w.kappas[i]) * (2 * q[i] + 1) + w.kappas[i] * (in ? 1 : -1);
        }
        out.push_back(v);
        int i = 0;
        while (i < n && ++q[i] == bound) q[i++] = 0;
        if (i == n) break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Index>(v.size()));
  Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST(ScalarModel, Examples) {
  const auto one = scalar_well(vec({0.0}), Eigen::MatrixXd::Constant(1, 1, 2.0), 0.0);
  EXPECT_EQ(scalar_model_spectrum({one}, 4).values(), (std::vector<double>{1, 3, 5, 7}));

  const Eigen::MatrixXd h8 = Eigen::MatrixXd::Constant(1, 1, 8.0);
  const auto dw = scalar_model_spectrum({scalar_well(vec({-1.0}), h8, 0.0), scalar_well(vec({1.0}), h8, 0.0)}, 6);
  EXPECT_EQ(dw.values(), (std::vector<double>{2, 2, 6, 6, 10, 10}));
  EXPECT_EQ(dw.levels[0].well, 0);
  EXPECT_EQ(dw.levels[1].well, 1);

  Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(2, 2);
  h2(0, 0) = 2.0;
  h2(1, 1) = 8.0;
  const auto two = scalar_model_spectrum({scalar_well(vec({0.0, 0.0}), h2, 0.5)}, 4).values();
  EXPECT_NEAR(two[0], 3.5, 1e-12);
  EXPECT_NEAR(two[1], 5.5, 1e-12);
  EXPECT_NEAR(two[2], 7.5, 1e-12);
  EXPECT_NEAR(two[3], 7.5, 1e-12);
}

TEST(ScalarModel, MatchesBruteForce) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<WellData> wells;
    for (int a = 0; a < 1 + static_cast<int>(rng() % 3); ++a) {
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) h(i, i) = 2.0 * u(rng) * u(rng);
      wells.push_back(scalar_well(Eigen::VectorXd::Zero(n), h, u(rng) - 1.0));
    }
    const int count = 15;
    const auto got = scalar_model_spectrum(wells, count).values();
    // 40 quanta per direction exceed any of the first 15 levels for ω ≥ 0.3.
    const auto want = brute_scalar(wells, n == 1 ? 60 : (n == 2 ? 40 : 20));
    for (int i = 0; i < count; ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
  }
}

TEST(Gamma, Examples) {
  EXPECT_EQ(gamma(2, {}, 0), -2);
  EXPECT_EQ(gamma(2, {2}, 1), -2);
  EXPECT_EQ(gamma(2, {1}, 1), 2);
}

TEST(Gamma, LowerBoundExhaustive) {
  for (int n = 1; n <= 6; ++n)
    for (int mu = 0; mu <= n; ++mu)
      for (int p = 0; p <= n; ++p)
        for (const auto& I : multi_indices(n, p)) {
          const int g = gamma(n, I, mu);
          EXPECT_GE(g, -n);
          MultiIndex top;
          for (int i = n - mu + 1; i <= n; ++i) top.push_back(i);
          EXPECT_EQ(g == -n, I == top) << n << " " << mu;
        }
}

TEST(FormModel, TorusWells) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  const std::vector<WellData> wells = {form_well(0, ones), form_well(1, ones), form_well(1, ones), form_well(2, ones)};
  const auto s1 = form_model_spectrum(2, wells, 1, 6);
  EXPECT_EQ(model_kernel_dimension(s1), 2);
  EXPECT_NEAR(s1.values()[2], 2.0, 1e-12);
  EXPECT_EQ(model_kernel_dimension(form_model_spectrum(2, wells, 0, 6)), 1);
}

TEST(FormModel, KernelCountsEqualIndexCountsExhaustive) {
  for (int n = 1; n <= 4; ++n) {
    // Every assignment of indices to up to three wells.
    const int wells_max = 3;
    std::vector<int> mus(wells_max, 0);
    while (true) {
      std::vector<WellData> wells;
      for (int mu : mus) wells.push_back(form_well(mu, Eigen::VectorXd::Ones(n)));
      for (int p = 0; p <= n; ++p) {
        const int want = static_cast<int>(std::count(mus.begin(), mus.end(), p));
        EXPECT_EQ(model_kernel_dimension(form_model_spectrum(n, wells, p, want + 2)), want);
      }
      int i = 0;
      while (i < wells_max && ++mus[i] > n) mus[i++] = 0;
      if (i == wells_max) break;
    }
  }
}

TEST(FormModel, MatchesBruteForce) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<WellData> wells;
    for (int a = 0; a < 2; ++a) {
      Eigen::VectorXd om(n);
      for (int i = 0; i < n; ++i) om[i] = u(rng);
      wells.push_back(form_well(static_cast<int>(rng() % (n + 1)), om));
    }
    for (int p = 0; p <= n; ++p) {
      const auto got = form_model_spectrum(n, wells, p, 12).values();
      const auto want = brute_form(n, wells, p, n == 1 ? 40 : (n == 2 ? 25 : 14));
      for (int i = 0; i < 12; ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
    }
  }
}

TEST(SchrodingerGrid, HarmonicGroundState) {
  const BoxDomain box{{-8.0}, {8.0}, false};
  const Potential h = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
  const Potential g = [](const Eigen::VectorXd&) { return 0.0; };
  SpectrumRequest req;
  req.k = 1;
  const double e1 = smallest_eigs(scalar_schrodinger_grid(box, h, g, 10.0, 1024, {vec({0.0})}), req).eigenvalues[0];
  EXPECT_NEAR(e1 / 10.0, 1.0, 1e-3);
}

TEST(SchrodingerGrid, ConstantShiftIsExact) {
  const BoxDomain box{{-4.0}, {4.0}, false};
  const Potential h = [](const Eigen::VectorXd& x) { return std::pow(1 - x[0] * x[0], 2); };
  const Potential g0 = [](const Eigen::VectorXd&) { return 0.0; };
  const Potential gc = [](const Eigen::VectorXd&) { return 0.75; };
  const double lambda = 20.0;
  const auto a = scalar_schrodinger_grid(box, h, g0, lambda, 256);
  const auto b = scalar_schrodinger_grid(box, h, gc, lambda, 256);
  const Eigen::MatrixXd diff = b.to_dense() - a.to_dense() - lambda * 0.75 * Eigen::MatrixXd::Identity(256, 256);
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12 * a.norm_bound());
}

TEST(SchrodingerGrid, Errors) {
  const BoxDomain box{{-2.0}, {2.0}, false};
  const Potential h = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
  const Potential g = [](const Eigen::VectorXd&) { return 0.0; };
  try {
    scalar_schrodinger_grid(box, h, g, 5.0, 64, {vec({1.9})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WellTooCloseToBoundary);
  }
  const Potential neg = [](const Eigen::VectorXd& x) { return -x[0] * x[0]; };
  EXPECT_THROW(scalar_schrodinger_grid(box, neg, g, 5.0, 64), Error);
}

TEST(Convergence, DoubleWellTable) {
  const BoxDomain box{{-4.0}, {4.0}, false};
  const Potential h = [](const Eigen::VectorXd& x) { return std::pow(1 - x[0] * x[0], 2); };
  const Potential g = [](const Eigen::VectorXd&) { return 0.0; };
  const auto family = [&](double lambda) {
    return scalar_schrodinger_grid(box, h, g, lambda, refined_grid_size(512, 5.0, lambda), {vec({-1.0}), vec({1.0})});
  };
  const auto t = semiclassical_convergence(family, {2.0, 2.0}, {5.0, 10.0, 20.0}, 2);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_TRUE(t.monotone[0]);
  EXPECT_LT(t.rows[4].deviation, 0.1);
}

TEST(WindowGrowth, QuadraticTop) {
  const BoxDomain box{{-4.0}, {4.0}, false};
  const Potential h = [](const Eigen::VectorXd& x) { return std::pow(1 - x[0] * x[0], 2); };
  const Potential g = [](const Eigen::VectorXd&) { return 0.0; };
  const auto family = [&](double lambda) { return scalar_schrodinger_grid(box, h, g, lambda, 256); };
  EXPECT_TRUE(window_growth_check(family, {5.0, 10.0, 20.0}, 1.0).pass);
}

TEST(Partition, SingleCenterSumsToOne) {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(vec({-3.0 + 6.0 * i / 199.0}));
  for (double lambda : {1.0, 10.0, 1000.0}) {
    const auto part = build_partition(pts, {vec({0.0})}, lambda);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double s = part.j[0][i] * part.j[0][i] + part.j[1][i] * part.j[1][i];
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(Partition, SupportsAndOverlap) {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 400; ++i) pts.push_back(vec({-2.0 + 4.0 * i / 399.0}));
  const double lambda = 100.0;  // λ^{-2/5} ≈ 0.158 < d/4 = 0.5
  const auto part = build_partition(pts, {vec({-1.0}), vec({1.0})}, lambda);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(part.j[1][i] * part.j[2][i], 0.0);
  try {
    build_partition(pts, {vec({-0.1}), vec({0.1})}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingSupports);
  }
}

TEST(Ims, IdentityPartitionIsExact) {
  const std::vector<Entry> e = {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}};
  const auto h = SparseSymOperator::assemble(e, 2);
  SparseMatrix id(2, 2);
  id.setIdentity();
  EXPECT_EQ(ims_identity_check(h, std::vector<SparseMatrix>{id}).deviation, 0.0);
  SparseMatrix off(2, 2);
  off.insert(0, 1) = 1.0;
  try {
    ims_identity_check(h, std::vector<SparseMatrix>{off});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NonDiagonalPartition);
  }
}

TEST(Ims, DoubleWellThreePieces) {
  const BoxDomain box{{-3.0}, {3.0}, false};
  const Potential h = [](const Eigen::VectorXd& x) { return std::pow(1 - x[0] * x[0], 2); };
  const Potential g = [](const Eigen::VectorXd&) { return 0.0; };
  const int N = 400;
  const auto op = scalar_schrodinger_grid(box, h, g, 10.0, N);
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < N; ++k) pts.push_back(vec({grid_coordinate(box, 0, N, k)}));
  const auto part = build_partition(pts, {vec({-1.0}), vec({1.0})}, 10.0);
  const auto r = ims_identity_check(op, part);
  EXPECT_LE(r.deviation, 1e-12 * r.norm);
  EXPECT_LT(r.partition_defect, 1e-12);
}
