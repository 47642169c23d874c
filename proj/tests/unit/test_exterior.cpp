#include <gtest/gtest.h>

#include "witten/error.hpp"
#include "witten/exterior.hpp"

using namespace witten;

TEST(MultiIndices, CountsAndOrder) {
  for (int n = 1; n <= 5; ++n)
    for (int p = 0; p <= n; ++p) EXPECT_EQ(static_cast<long>(multi_indices(n, p).size()), binomial(n, p));
  EXPECT_EQ(multi_indices(3, 2), (std::vector<MultiIndex>{{1, 2}, {1, 3}, {2, 3}}));
  EXPECT_EQ(multi_index_position(3, {2, 3}), 2);
  EXPECT_EQ(multi_index_position(3, {3, 2}), -1);
}

TEST(Fermions, CommutatorExamples) {
  const Eigen::MatrixXd a = fermion_commutator_matrix(2, 1, 1, 1);
  EXPECT_EQ(a, (Eigen::MatrixXd(2, 2) << 1, 0, 0, -1).finished());
  EXPECT_EQ(fermion_commutator_matrix(2, 0, 1, 1), Eigen::MatrixXd::Constant(1, 1, -1.0));
  const Eigen::MatrixXd c = fermion_commutator_matrix(2, 1, 1, 2);
  // Maps dx² to a multiple of dx¹ and annihilates dx¹. For i ≠ j the
  // commutator is 2 (a^i)* a^j, so the multiple is 2.
  EXPECT_EQ(c(0, 0), 0.0);
  EXPECT_EQ(c(1, 0), 0.0);
  EXPECT_EQ(c(1, 1), 0.0);
  EXPECT_EQ(c(0, 1), 2.0);
}

TEST(Fermions, CommutatorIsTwiceProductMinusDelta) {
  for (int n = 1; n <= 4; ++n)
    for (int p = 0; p <= n; ++p)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          const long dim = binomial(n, p);
          Eigen::MatrixXd want = -(i == j ? 1.0 : 0.0) * Eigen::MatrixXd::Identity(dim, dim);
          if (p > 0) want += 2.0 * wedge_matrix(n, p - 1, i) * interior_matrix(n, p, j);
          EXPECT_EQ(fermion_commutator_matrix(n, p, i, j), want);
        }
}

TEST(Fermions, CanonicalAnticommutationExact) {
  for (int n = 1; n <= 4; ++n)
    for (int p = 0; p <= n; ++p)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          // {a^i, (a^j)*} on Λ^p.
          Eigen::MatrixXd acomm = Eigen::MatrixXd::Zero(binomial(n, p), binomial(n, p));
          if (p < n) acomm += interior_matrix(n, p + 1, i) * wedge_matrix(n, p, j);
          if (p > 0) acomm += wedge_matrix(n, p - 1, j) * interior_matrix(n, p, i);
          const Eigen::MatrixXd want =
              (i == j ? 1.0 : 0.0) * Eigen::MatrixXd::Identity(binomial(n, p), binomial(n, p));
          EXPECT_EQ(acomm, want) << n << p << i << j;
        }
}

TEST(Fermions, InteriorIsAdjointOfWedge) {
  for (int n = 1; n <= 4; ++n)
    for (int p = 1; p <= n; ++p)
      for (int i = 1; i <= n; ++i) EXPECT_EQ(interior_matrix(n, p, i), wedge_matrix(n, p - 1, i).transpose());
}

TEST(Fermions, WedgeSign) {
  // dx¹ ∧ dx² = +dx¹², dx² ∧ dx¹ = -dx¹².
  EXPECT_EQ(wedge_matrix(2, 1, 1)(0, 1), 1.0);
  EXPECT_EQ(wedge_matrix(2, 1, 2)(0, 0), -1.0);
}

TEST(Fermions, RangeErrors) {
  EXPECT_THROW(wedge_matrix(2, 3, 1), Error);
  EXPECT_THROW(wedge_matrix(2, 1, 3), Error);
  EXPECT_THROW(interior_matrix(2, -1, 1), Error);
  EXPECT_EQ(interior_matrix(2, 0, 1).rows(), 0);
  EXPECT_THROW(fermion_commutator_matrix(2, 1, 0, 1), Error);
}
