#include <algorithm>
#include <cmath>
#include <sstream>

#include "witten/deformation.hpp"
#include "witten/error.hpp"
#include "witten/exterior.hpp"

namespace witten {

double TorusGrid::spacing() const { return 2.0 * M_PI / N; }

Index TorusGrid::nodes() const {
  Index total = 1;
  for (int k = 0; k < n; ++k) total *= N;
  return total;
}

Index TorusGrid::dim(int p) const { return static_cast<Index>(binomial(n, p)) * nodes(); }

void validate_grid(const TorusGrid& grid) {
  if (grid.n < 1 || grid.n > 3) throw Error(ErrorCode::InvalidInput, "grid dimension must be 1, 2 or 3");
  if (grid.order < 2 || grid.order % 2 != 0 || grid.order > 16) {
    throw Error(ErrorCode::InvalidInput, "stencil order must be even and in [2, 16]");
  }
  if (grid.N < std::max(4, grid.order + 1)) {
    std::ostringstream msg;
    msg << "grid needs N > stencil order, got N = " << grid.N;
    throw Error(ErrorCode::InvalidInput, msg.str());
  }
}

std::vector<double> staggered_stencil(int order) {
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  Mat a(order, order);
  Vec b = Vec::Zero(order);
  b[1] = 1.0L;
  for (int m = 0; m < order; ++m) {
    const long double offset = static_cast<long double>(m - order / 2) + 0.5L;
    long double power = 1.0L;
    for (int q = 0; q < order; ++q) {
      a(q, m) = power;
      power *= offset;
    }
  }
  Vec w = a.fullPivLu().solve(b);
  std::vector<double> out;
  for (int m = 0; m < order; ++m) out.push_back(static_cast<double>(w[m]));
  return out;
}

namespace {

std::vector<int> unflatten(const TorusGrid& g, Index node) {
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  for (int k = 0; k < g.n; ++k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(node % g.N);
    node /= g.N;
  }
  return idx;
}

Index flatten(const TorusGrid& g, const std::vector<int>& idx) {
  Index node = 0;
  for (int k = g.n - 1; k >= 0; --k) {
    node = node * g.N + ((idx[static_cast<std::size_t>(k)] % g.N) + g.N) % g.N;
  }
  return node;
}

bool contains(const MultiIndex& I, int axis) {
  return std::find(I.begin(), I.end(), axis) != I.end();
}

}  // namespace

Eigen::VectorXd grid_position(const TorusGrid& grid, int p, int c, Index node) {
  const auto basis = multi_indices(grid.n, p);
  const MultiIndex& I = basis.at(static_cast<std::size_t>(c));
  const auto idx = unflatten(grid, node);
  const double h = grid.spacing();
  Eigen::VectorXd x(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    x[k] = h * (idx[static_cast<std::size_t>(k)] + (contains(I, k + 1) ? 0.5 : 0.0));
  }
  return x;
}

CochainComplex grid_complex(const TorusGrid& grid) {
  validate_grid(grid);
  const auto w = staggered_stencil(grid.order);
  const double h = grid.spacing();
  const Index nodes = grid.nodes();
  CochainComplex out;
  for (int p = 0; p <= grid.n; ++p) out.weights.push_back(Eigen::VectorXd::Ones(grid.dim(p)));

  for (int p = 0; p < grid.n; ++p) {
    const auto from = multi_indices(grid.n, p);
    const auto to = multi_indices(grid.n, p + 1);
    std::vector<Entry> entries;
    for (std::size_t r = 0; r < to.size(); ++r) {
      const MultiIndex& J = to[r];
      for (std::size_t pos = 0; pos < J.size(); ++pos) {
        const int axis = J[pos];
        MultiIndex I = J;
        I.erase(I.begin() + static_cast<long>(pos));
        const auto c = static_cast<Index>(std::lower_bound(from.begin(), from.end(), I) - from.begin());
        const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
        for (Index node = 0; node < nodes; ++node) {
          auto idx = unflatten(grid, node);
          const int base = idx[static_cast<std::size_t>(axis - 1)];
          // Output sits at base + 1/2 along `axis`; input offsets m - order/2 + 1/2 from there.
          for (int m = 0; m < grid.order; ++m) {
            idx[static_cast<std::size_t>(axis - 1)] = base + 1 + m - grid.order / 2;
            entries.emplace_back(static_cast<int>(static_cast<Index>(r) * nodes + node),
                                 static_cast<int>(c * nodes + flatten(grid, idx)),
                                 sign * w[static_cast<std::size_t>(m)] / h);
          }
        }
      }
    }
    SparseMatrix d(grid.dim(p + 1), grid.dim(p));
    d.setFromTriplets(entries.begin(), entries.end());
    out.d.push_back(std::move(d));
  }
  return out;
}

std::vector<Eigen::VectorXd> grid_samples(const TorusGrid& grid, const MorseFunctionSpec& spec) {
  validate_grid(grid);
  if (spec.dim != grid.n || !spec.period || spec.charts.empty()) {
    throw Error(ErrorCode::InvalidInput, "grid functions must be periodic with matching dimension");
  }
  const Chart& chart = spec.charts.front();
  std::vector<Eigen::VectorXd> out;
  for (int p = 0; p <= grid.n; ++p) {
    Eigen::VectorXd v(grid.dim(p));
    const int comps = static_cast<int>(binomial(grid.n, p));
    for (int c = 0; c < comps; ++c) {
      for (Index node = 0; node < grid.nodes(); ++node) {
        v[c * grid.nodes() + node] = chart.f(grid_position(grid, p, c, node));
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

SparseSymOperator grid_conjugated_laplacian(const TorusGrid& grid, const MorseFunctionSpec& spec,
                                            double t, int p) {
  if (p < 0 || p > grid.n) throw Error(ErrorCode::DegreeOutOfRange, "form degree outside [0, n]");
  const DeformedComplex deformed = deform(grid_complex(grid), grid_samples(grid, spec), t);
  return witten_laplacian_dec(deformed, p);
}

SparseSymOperator grid_witten_laplacian(const TorusGrid& grid, const MorseFunctionSpec& spec,
                                        double t, int p) {
  validate_grid(grid);
  if (p < 0 || p > grid.n) throw Error(ErrorCode::DegreeOutOfRange, "form degree outside [0, n]");
  if (spec.dim != grid.n || !spec.period || spec.charts.empty()) {
    throw Error(ErrorCode::InvalidInput, "grid functions must be periodic with matching dimension");
  }
  const Chart& chart = spec.charts.front();
  const double h = grid.spacing();
  const Index nodes = grid.nodes();
  const auto basis = multi_indices(grid.n, p);
  const int comps = static_cast<int>(basis.size());

  // Componentwise Laplacian: autocorrelation of the staggered stencil along each axis.
  const auto w = staggered_stencil(grid.order);
  const int order = grid.order;
  std::vector<double> lap(static_cast<std::size_t>(2 * order - 1), 0.0);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      lap[static_cast<std::size_t>(a - b + order - 1)] +=
          w[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(b)] / (h * h);
    }
  }

  std::vector<std::vector<Eigen::MatrixXd>> commutators(static_cast<std::size_t>(grid.n));
  for (int i = 1; i <= grid.n; ++i) {
    for (int j = 1; j <= grid.n; ++j) {
      commutators[static_cast<std::size_t>(i - 1)].push_back(fermion_commutator_matrix(grid.n, p, i, j));
    }
  }

  std::vector<Entry> entries;
  for (int c = 0; c < comps; ++c) {
    for (Index node = 0; node < nodes; ++node) {
      const Index row = c * nodes + node;
      const auto idx = unflatten(grid, node);
      for (int axis = 0; axis < grid.n; ++axis) {
        for (int s = -(order - 1); s <= order - 1; ++s) {
          auto j = idx;
          j[static_cast<std::size_t>(axis)] += s;
          entries.emplace_back(static_cast<int>(row), static_cast<int>(c * nodes + flatten(grid, j)),
                               lap[static_cast<std::size_t>(s + order - 1)]);
        }
      }
      const Eigen::VectorXd x = grid_position(grid, p, c, node);
      const Eigen::VectorXd g = chart.grad(x);
      const Eigen::MatrixXd hs = chart.hess(x);
      double diag = t * t * g.squaredNorm();
      for (int i = 0; i < grid.n; ++i) {
        diag += t * hs(i, i) * commutators[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)](c, c);
      }
      entries.emplace_back(static_cast<int>(row), static_cast<int>(row), diag);
    }
  }

  // Mixed second derivatives couple components I and I' = I - {j} + {i}, whose
  // lattices are offset by h/2 along axes i and j. The coupling is spread over
  // the four nearest partner nodes with f_ij taken at the midpoint.
  for (int i = 1; i <= grid.n; ++i) {
    for (int j = 1; j <= grid.n; ++j) {
      if (i == j) continue;
      const Eigen::MatrixXd& m = commutators[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
      for (int r = 0; r < comps; ++r) {
        for (int c = 0; c < comps; ++c) {
          const double coeff = m(r, c);
          if (coeff == 0.0) continue;
          const MultiIndex& I = basis[static_cast<std::size_t>(r)];
          const MultiIndex& K = basis[static_cast<std::size_t>(c)];
          for (Index node = 0; node < nodes; ++node) {
            const Eigen::VectorXd x = grid_position(grid, p, r, node);
            const auto idx = unflatten(grid, node);
            for (int si : {0, 1}) {
              for (int sj : {0, 1}) {
                auto k = idx;
                // Partner offsets along i and j: shift so the partner sits h/2 away.
                for (auto [axis, bit] : {std::pair{i, si}, std::pair{j, sj}}) {
                  const double own = contains(I, axis) ? 0.5 : 0.0;
                  const double other = contains(K, axis) ? 0.5 : 0.0;
                  // Partner coordinate = k + other, must equal x/h +- 1/2.
                  const double target = idx[static_cast<std::size_t>(axis - 1)] + own + (bit ? 0.5 : -0.5);
                  k[static_cast<std::size_t>(axis - 1)] = static_cast<int>(std::lround(target - other));
                }
                const Eigen::VectorXd y = grid_position(grid, p, c, flatten(grid, k));
                Eigen::VectorXd mid = x;
                for (int a = 0; a < grid.n; ++a) {
                  double delta = y[a] - x[a];
                  delta -= 2.0 * M_PI * std::round(delta / (2.0 * M_PI));
                  mid[a] = x[a] + 0.5 * delta;
                }
                const double fij = chart.hess(mid)(i - 1, j - 1);
                entries.emplace_back(static_cast<int>(r * nodes + node),
                                     static_cast<int>(c * nodes + flatten(grid, k)),
                                     0.25 * t * fij * coeff);
              }
            }
          }
        }
      }
    }
  }

  return SparseSymOperator::assemble(entries, grid.dim(p));
}

}  // namespace witten
