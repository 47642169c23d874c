#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "witten/catalog.hpp"
#include "witten/error.hpp"
#include "witten/morse.hpp"
#include "witten/simplicial.hpp"

using namespace witten;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form critical list for a cos(k1 x) + cos(k2 y): sin(k x) = 0 on each axis,
// Hessian diag(-k1² cos(k1 x), -k2² cos(k2 y)).
std::vector<int> cosine_sum_counts(int k1, int k2) {
  std::vector<int> m(3, 0);
  for (int a = 0; a < 2 * k1; ++a)
    for (int b = 0; b < 2 * k2; ++b) {
      const double x = a * kPi / k1, y = b * kPi / k2;
      const int idx = (-std::cos(k1 * x) < 0) + (-std::cos(k2 * y) < 0);
      ++m[idx];
    }
  return m;
}

int count_negative(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
  return static_cast<int>((es.eigenvalues().array() < 0).count());
}

// Brute-force oracle for (N - P)(t) = (1 + t) Q(t) with Q >= 0: try every
// quotient by synthetic division independently of the library.
bool gap_oracle(const std::vector<int>& m, const std::vector<int>& b) {
  std::vector<long long> diff(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) diff[i] = m[i] - b[i];
  std::vector<long long> q(m.size(), 0);
  long long carry = 0;
  for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
    q[i] = diff[i] - carry;
    carry = q[i];
  }
  if (diff.back() != carry) return false;
  for (std::size_t i = 0; i + 1 < q.size(); ++i)
    if (q[i] < 0) return false;
  return true;
}

}  // namespace

TEST(CriticalPoints, CircleCos) {
  const auto pts = find_critical_points(catalog_function("circle/cos"), 24);
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& p : pts) {
    const double x = p.location[0];
    if (std::abs(x) < 1e-8 || std::abs(x - 2 * kPi) < 1e-8) {
      EXPECT_EQ(p.index, 1);
    } else {
      EXPECT_NEAR(x, kPi, 1e-8);
      EXPECT_EQ(p.index, 0);
    }
  }
}

TEST(CriticalPoints, TorusFunctionsAgainstClosedForm) {
  const auto a = find_critical_points(catalog_function("torus/cos+cos"), 24);
  EXPECT_EQ(a.size(), 4u);
  EXPECT_EQ(morse_counts(a, 2), cosine_sum_counts(1, 1));
  const auto b = find_critical_points(catalog_function("torus/cos2x+cosy"), 24);
  EXPECT_EQ(b.size(), 8u);
  EXPECT_EQ(morse_counts(b, 2), cosine_sum_counts(2, 1));
  EXPECT_EQ(morse_counts(b, 2), (MorseCounts{2, 4, 2}));
}

TEST(CriticalPoints, SphereHeight) {
  const auto pts = find_critical_points(sphere_height(), 16);
  EXPECT_EQ(morse_counts(pts, 2), (MorseCounts{1, 0, 1}));
}

TEST(CriticalPoints, IndexInvariantUnderReparameterization) {
  // At a critical point the Hessian transforms as Jᵀ H J under x = φ(u).
  const auto spec = sphere_height();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& p : find_critical_points(spec, 16)) {
    const Eigen::MatrixXd h = spec.charts[p.chart].hess(p.location);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd j(2, 2);
      j << u(rng), u(rng), u(rng), u(rng);
      if (std::abs(j.determinant()) < 1e-2) continue;
      EXPECT_EQ(count_negative(j.transpose() * h * j), p.index);
    }
  }
}

TEST(CriticalPoints, DegenerateRejected) {
  // The y direction is nearly flat: Hessian eigenvalue 1e-12 is below the floor.
  const auto spec = cosine_sum("nearly-flat", {1.0, 1e-12}, {1.0, 1.0});
  try {
    find_critical_points(spec, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateCritical);
  }
}

TEST(CriticalPoints, CatalogDerivativesConsistent) {
  for (const auto& e : catalog()) EXPECT_LT(derivative_consistency(catalog_function(e.key), 20, 1), 1e-5) << e.key;
}

TEST(MorseIndexTheorem, CatalogPairs) {
  for (const auto& e : catalog()) {
    const auto m = morse_counts(find_critical_points(catalog_function(e.key), 24), e.dim);
    int alt = 0;
    for (std::size_t p = 0; p < m.size(); ++p) alt += (p % 2 ? -1 : 1) * m[p];
    EXPECT_EQ(alt, euler_characteristic(catalog_complex(e.key))) << e.key;
  }
}

TEST(Inequalities, WeakExamples) {
  EXPECT_TRUE(check_weak({1, 2, 1}, {1, 2, 1}).pass);
  EXPECT_TRUE(check_weak({2, 4, 2}, {1, 2, 1}).pass);
  const auto r = check_weak({1, 0, 1}, {1, 1, 1});
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.holds[0]);
  EXPECT_FALSE(r.holds[1]);
  EXPECT_TRUE(r.holds[2]);
}

TEST(Inequalities, StrongExamples) {
  const auto a = check_strong({2, 4, 2}, {1, 2, 1});
  EXPECT_TRUE(a.pass);
  EXPECT_TRUE(a.top_equality);
  EXPECT_EQ(a.lhs.back(), 0);
  EXPECT_EQ(a.rhs.back(), 0);
  EXPECT_TRUE(check_strong({1, 2, 1}, {1, 2, 1}).pass);
  const auto b = check_strong({1, 1, 1}, {1, 0, 1});
  EXPECT_FALSE(b.pass);
  EXPECT_FALSE(b.holds[2]);
  EXPECT_THROW(check_strong({1, 2}, {1, 2, 1}), Error);
}

TEST(PolynomialGapTest, Examples) {
  EXPECT_EQ(polynomial_gap({1, 2, 1}, {1, 2, 1}).q, (std::vector<long long>{0, 0}));
  EXPECT_EQ(polynomial_gap({1, 3, 2}, {1, 2, 1}).q, (std::vector<long long>{0, 1}));
  EXPECT_EQ(polynomial_gap({2, 4, 2}, {1, 2, 1}).q, (std::vector<long long>{1, 1}));
  try {
    polynomial_gap({1, 1, 1}, {1, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonzeroRemainder);
  }
}

TEST(PolynomialGapTest, EquivalentToStrongWithTopEquality) {
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<int> len(1, 6), entry(0, 9);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(rng);
    std::vector<int> m(n + 1), b(n + 1);
    for (int i = 0; i <= n; ++i) {
      m[i] = entry(rng);
      b[i] = entry(rng);
    }
    bool gap_ok = false;
    try {
      gap_ok = polynomial_gap(m, b).nonnegative;
    } catch (const Error&) {
      gap_ok = false;
    }
    const auto s = check_strong(m, b);
    EXPECT_EQ(gap_ok, s.pass && s.top_equality);
    EXPECT_EQ(gap_ok, gap_oracle(m, b));
  }
}
