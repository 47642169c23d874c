#include "witten/exterior.hpp"

#include <algorithm>
#include <sstream>

#include "witten/error.hpp"

namespace witten {

namespace {

void check_np(int n, int p) {
  if (n < 1 || p < 0 || p > n) {
    std::ostringstream msg;
    msg << "form degree " << p << " invalid for dimension " << n;
    throw Error(ErrorCode::DegreeOutOfRange, msg.str());
  }
}

void check_direction(int n, int i) {
  if (i < 1 || i > n) {
    std::ostringstream msg;
    msg << "direction " << i << " outside [1, " << n << "]";
    throw Error(ErrorCode::IndexOutOfRange, msg.str());
  }
}

}  // namespace

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<MultiIndex> multi_indices(int n, int p) {
  check_np(n, p);
  std::vector<MultiIndex> out;
  MultiIndex cur;
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(cur.size()) == p) {
      out.push_back(cur);
      return;
    }
    for (int v = next; v <= n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

int multi_index_position(int n, const MultiIndex& I) {
  if (static_cast<int>(I.size()) > n) return -1;
  const auto basis = multi_indices(n, static_cast<int>(I.size()));
  auto it = std::lower_bound(basis.begin(), basis.end(), I);
  if (it == basis.end() || *it != I) return -1;
  return static_cast<int>(it - basis.begin());
}

Eigen::MatrixXd wedge_matrix(int n, int p, int i) {
  check_np(n, p);
  check_direction(n, i);
  const auto from = multi_indices(n, p);
  if (p == n) return Eigen::MatrixXd::Zero(0, static_cast<Eigen::Index>(from.size()));
  const auto to = multi_indices(n, p + 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.size()),
                                            static_cast<Eigen::Index>(from.size()));
  for (std::size_t c = 0; c < from.size(); ++c) {
    const MultiIndex& I = from[c];
    if (std::find(I.begin(), I.end(), i) != I.end()) continue;
    // Moving dx^i past the smaller indices of I.
    const long before = std::count_if(I.begin(), I.end(), [i](int v) { return v < i; });
    MultiIndex J = I;
    J.insert(std::upper_bound(J.begin(), J.end(), i), i);
    const auto r = std::lower_bound(to.begin(), to.end(), J) - to.begin();
    m(r, static_cast<Eigen::Index>(c)) = (before % 2 == 0) ? 1.0 : -1.0;
  }
  return m;
}

Eigen::MatrixXd interior_matrix(int n, int p, int i) {
  check_np(n, p);
  check_direction(n, i);
  if (p == 0) return Eigen::MatrixXd::Zero(0, 1);
  return wedge_matrix(n, p - 1, i).transpose();
}

Eigen::MatrixXd fermion_commutator_matrix(int n, int p, int i, int j) {
  check_np(n, p);
  check_direction(n, i);
  check_direction(n, j);
  const auto dim = static_cast<Eigen::Index>(binomial(n, p));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  if (p > 0) m += wedge_matrix(n, p - 1, i) * interior_matrix(n, p, j);
  if (p < n) m -= interior_matrix(n, p + 1, j) * wedge_matrix(n, p, i);
  return m;
}

}  // namespace witten
