#pragma once

#include <vector>

#include <Eigen/Dense>

namespace witten {

using MultiIndex = std::vector<int>;  // strictly increasing, 1-based

/// Basis of Λ^p(R^n): increasing multi-indices in lexicographic order.
std::vector<MultiIndex> multi_indices(int n, int p);
/// Position of I in multi_indices(n, |I|), or -1.
int multi_index_position(int n, const MultiIndex& I);
long binomial(int n, int k);

/// (a^i)* = dx^i ∧ (.) : Λ^p -> Λ^{p+1}.
Eigen::MatrixXd wedge_matrix(int n, int p, int i);
/// a^i : Λ^p -> Λ^{p-1}, the transpose of wedge_matrix(n, p - 1, i).
Eigen::MatrixXd interior_matrix(int n, int p, int i);

/// [(a^i)*, a^j] restricted to Λ^p. For i == j it is diagonal with +1 on
/// basis elements containing i and -1 elsewhere.
Eigen::MatrixXd fermion_commutator_matrix(int n, int p, int i, int j);

}  // namespace witten
