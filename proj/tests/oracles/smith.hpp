#pragma once

// Integer Smith normal form by unimodular row and column operations. Used only
// as a test oracle for ranks and Betti numbers.

#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace oracle {

using IntDense = std::vector<std::vector<long long>>;

struct SmithForm {
  std::vector<long long> diagonal;  // nonzero invariant factors, each dividing the next
  int rank() const { return static_cast<int>(diagonal.size()); }
};

inline SmithForm smith_normal_form(IntDense a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  SmithForm out;
  std::size_t k = 0;
  while (k < rows && k < cols) {
    // Pivot: smallest nonzero absolute value in the trailing block.
    std::size_t pr = rows, pc = cols;
    long long best = 0;
    for (std::size_t i = k; i < rows; ++i)
      for (std::size_t j = k; j < cols; ++j)
        if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
          best = std::llabs(a[i][j]);
          pr = i;
          pc = j;
        }
    if (best == 0) break;
    std::swap(a[k], a[pr]);
    for (auto& row : a) std::swap(row[k], row[pc]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        const long long q = a[i][k] / a[k][k];
        if (q != 0)
          for (std::size_t j = k; j < cols; ++j) a[i][j] -= q * a[k][j];
        if (a[i][k] != 0) {
          std::swap(a[k], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        const long long q = a[k][j] / a[k][k];
        if (q != 0)
          for (std::size_t i = k; i < rows; ++i) a[i][j] -= q * a[i][k];
        if (a[k][j] != 0) {
          for (auto& row : a) std::swap(row[k], row[j]);
          clean = false;
        }
      }
      if (clean) {
        // Divisibility: fold any entry not divisible by the pivot into row k.
        for (std::size_t i = k + 1; i < rows && clean; ++i)
          for (std::size_t j = k + 1; j < cols && clean; ++j)
            if (a[i][j] % a[k][k] != 0) {
              for (std::size_t c = k; c < cols; ++c) a[k][c] += a[i][c];
              clean = false;
            }
      }
    }
    out.diagonal.push_back(std::llabs(a[k][k]));
    ++k;
  }
  return out;
}

/// β_p = dim C^p − rank d_p − rank d_{p−1} over the rationals.
inline std::vector<int> betti_from_ranks(const std::vector<int>& dims, const std::vector<int>& ranks) {
  std::vector<int> beta;
  for (std::size_t p = 0; p < dims.size(); ++p) {
    const int out_rank = p < ranks.size() ? ranks[p] : 0;
    const int in_rank = p > 0 ? ranks[p - 1] : 0;
    beta.push_back(dims[p] - out_rank - in_rank);
  }
  return beta;
}

}  // namespace oracle
