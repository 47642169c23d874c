#include "witten/simplicial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "witten/error.hpp"

namespace witten {

namespace {

void check_degree(const SimplicialComplex& c, int p, int lo, int hi, const char* what) {
  if (p < lo || p > hi) {
    std::ostringstream msg;
    msg << what << ": degree " << p << " outside [" << lo << ", " << hi << "] (top " << c.top()
        << ")";
    throw Error(ErrorCode::DegreeOutOfRange, msg.str());
  }
}

Eigen::Vector3d wrap(Eigen::Vector3d delta, const std::optional<double>& period) {
  if (period) {
    for (int axis = 0; axis < 2; ++axis) {
      delta[axis] -= *period * std::round(delta[axis] / *period);
    }
  }
  return delta;
}

// Vertex positions of a simplex, unwrapped around its first vertex.
std::vector<Eigen::Vector3d> unwrapped(const SimplicialComplex& c, const Simplex& s) {
  std::vector<Eigen::Vector3d> out;
  const Eigen::Vector3d& anchor = c.vertices[static_cast<std::size_t>(s.front())];
  for (int v : s) {
    out.push_back(anchor + wrap(c.vertices[static_cast<std::size_t>(v)] - anchor, c.period));
  }
  return out;
}

void floor_weights(Eigen::VectorXd& w) {
  if (w.size() == 0) return;
  std::vector<double> sorted(w.data(), w.data() + w.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2),
                   sorted.end());
  const double floor = 1e-2 * std::abs(sorted[sorted.size() / 2]);
  for (Index i = 0; i < w.size(); ++i) w[i] = std::max(w[i], floor);
}

}  // namespace

Index SimplicialComplex::count(int p) const {
  if (p < 0 || p > top()) return 0;
  return static_cast<Index>(simplices[static_cast<std::size_t>(p)].size());
}

Index SimplicialComplex::index_of(int p, const Simplex& s) const {
  if (p < 0 || p > top()) return -1;
  const auto& list = simplices[static_cast<std::size_t>(p)];
  auto it = std::lower_bound(list.begin(), list.end(), s);
  if (it == list.end() || *it != s) return -1;
  return static_cast<Index>(it - list.begin());
}

SimplicialComplex SimplicialComplex::from_top_simplices(std::vector<Eigen::Vector3d> vertices,
                                                        const std::vector<Simplex>& tops,
                                                        std::optional<double> period) {
  if (tops.empty()) throw Error(ErrorCode::InvalidInput, "complex has no simplices");
  const std::size_t k = tops.front().size();
  if (k == 0) throw Error(ErrorCode::InvalidInput, "empty simplex");
  std::vector<std::set<Simplex>> faces(k);
  for (const auto& t : tops) {
    if (t.size() != k) throw Error(ErrorCode::InvalidInput, "top simplices of mixed dimension");
    Simplex s = t;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw Error(ErrorCode::InvalidInput, "simplex with repeated vertex");
    }
    for (int v : s) {
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "simplex references a missing vertex");
      }
    }
    // All nonempty subsets.
    const unsigned full = 1u << k;
    for (unsigned mask = 1; mask < full; ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (1u << i)) face.push_back(s[i]);
      }
      faces[face.size() - 1].insert(face);
    }
  }
  SimplicialComplex c;
  c.vertices = std::move(vertices);
  c.period = period;
  c.simplices.resize(k);
  for (std::size_t p = 0; p < k; ++p) c.simplices[p].assign(faces[p].begin(), faces[p].end());
  // Isolated vertices are kept as 0-simplices.
  if (c.simplices[0].size() != c.vertices.size()) {
    c.simplices[0].clear();
    for (std::size_t v = 0; v < c.vertices.size(); ++v) c.simplices[0].push_back({static_cast<int>(v)});
  }
  return c;
}

IntMatrix coboundary(const SimplicialComplex& c, int p) {
  check_degree(c, p, 0, c.top() - 1, "coboundary");
  std::vector<Eigen::Triplet<int>> entries;
  const auto& rows = c.simplices[static_cast<std::size_t>(p + 1)];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Simplex& s = rows[r];
    for (std::size_t k = 0; k < s.size(); ++k) {
      Simplex face;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i != k) face.push_back(s[i]);
      }
      const Index col = c.index_of(p, face);
      entries.emplace_back(static_cast<int>(r), static_cast<int>(col), (k % 2 == 0) ? 1 : -1);
    }
  }
  IntMatrix d(c.count(p + 1), c.count(p));
  d.setFromTriplets(entries.begin(), entries.end());
  return d;
}

HodgeStarSet combinatorial_stars(const SimplicialComplex& c) {
  HodgeStarSet stars;
  for (int p = 0; p <= c.top(); ++p) stars.weights.push_back(Eigen::VectorXd::Ones(c.count(p)));
  return stars;
}

HodgeStarSet circumcentric_stars(const SimplicialComplex& c) {
  HodgeStarSet stars;
  if (c.top() == 1) {
    Eigen::VectorXd w0 = Eigen::VectorXd::Zero(c.count(0));
    Eigen::VectorXd w1(c.count(1));
    for (Index e = 0; e < c.count(1); ++e) {
      const Simplex& s = c.simplices[1][static_cast<std::size_t>(e)];
      auto x = unwrapped(c, s);
      const double len = (x[1] - x[0]).norm();
      w1[e] = 1.0 / len;
      w0[s[0]] += 0.5 * len;
      w0[s[1]] += 0.5 * len;
    }
    stars.weights = {w0, w1};
  } else if (c.top() == 2) {
    Eigen::VectorXd w0 = Eigen::VectorXd::Zero(c.count(0));
    Eigen::VectorXd w1 = Eigen::VectorXd::Zero(c.count(1));
    Eigen::VectorXd w2(c.count(2));
    for (Index t = 0; t < c.count(2); ++t) {
      const Simplex& s = c.simplices[2][static_cast<std::size_t>(t)];
      auto x = unwrapped(c, s);
      const double area = 0.5 * (x[1] - x[0]).cross(x[2] - x[0]).norm();
      w2[t] = 1.0 / area;
      for (int k = 0; k < 3; ++k) {
        // Edge opposite vertex k, and the cotangent of the angle at k.
        const int a = (k + 1) % 3;
        const int b = (k + 2) % 3;
        const Eigen::Vector3d u = x[static_cast<std::size_t>(a)] - x[static_cast<std::size_t>(k)];
        const Eigen::Vector3d v = x[static_cast<std::size_t>(b)] - x[static_cast<std::size_t>(k)];
        const double cot = u.dot(v) / u.cross(v).norm();
        Simplex edge = {s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]};
        std::sort(edge.begin(), edge.end());
        w1[c.index_of(1, edge)] += 0.5 * cot;
        const double len2 = (x[static_cast<std::size_t>(a)] - x[static_cast<std::size_t>(b)]).squaredNorm();
        w0[s[static_cast<std::size_t>(a)]] += 0.125 * cot * len2;
        w0[s[static_cast<std::size_t>(b)]] += 0.125 * cot * len2;
      }
    }
    stars.weights = {w0, w1, w2};
  } else {
    throw Error(ErrorCode::DegreeOutOfRange, "circumcentric stars need a 1- or 2-dimensional complex");
  }
  for (auto& w : stars.weights) floor_weights(w);
  return stars;
}

void validate_stars(const SimplicialComplex& c, const HodgeStarSet& stars) {
  if (static_cast<int>(stars.weights.size()) != c.top() + 1) {
    throw Error(ErrorCode::LengthMismatch, "star set does not cover every degree");
  }
  for (int p = 0; p <= c.top(); ++p) {
    const auto& w = stars.weights[static_cast<std::size_t>(p)];
    if (w.size() != c.count(p)) throw Error(ErrorCode::LengthMismatch, "star weight count mismatch");
    for (Index i = 0; i < w.size(); ++i) {
      if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
        throw Error(ErrorCode::InvalidInput, "star weights must be finite and positive");
      }
    }
  }
}

SparseMatrix codifferential(const SimplicialComplex& c, const HodgeStarSet& stars, int p) {
  check_degree(c, p, 1, c.top(), "codifferential");
  validate_stars(c, stars);
  SparseMatrix d = coboundary(c, p - 1).cast<double>();
  const auto& lower = stars.weights[static_cast<std::size_t>(p - 1)];
  const auto& upper = stars.weights[static_cast<std::size_t>(p)];
  SparseMatrix adj = lower.cwiseInverse().asDiagonal() * SparseMatrix(d.transpose()) *
                     upper.asDiagonal();
  return adj;
}

SparseSymOperator laplacian_from(const SparseMatrix* below, const SparseMatrix* above, Index dim) {
  SparseMatrix lap(dim, dim);
  if (below) lap += *below * SparseMatrix(below->transpose());
  if (above) lap += SparseMatrix(above->transpose()) * *above;
  return SparseSymOperator::from_matrix(lap);
}

SparseMatrix normalized_coboundary(const SparseMatrix& d, const Eigen::VectorXd& w_from,
                                   const Eigen::VectorXd& w_to) {
  return w_to.cwiseSqrt().asDiagonal() * d * w_from.cwiseSqrt().cwiseInverse().asDiagonal();
}

SparseSymOperator hodge_laplacian(const SimplicialComplex& c, const HodgeStarSet& stars, int p) {
  check_degree(c, p, 0, c.top(), "hodge_laplacian");
  validate_stars(c, stars);
  std::optional<SparseMatrix> below;
  std::optional<SparseMatrix> above;
  const auto& w = stars.weights;
  if (p > 0) {
    below = normalized_coboundary(coboundary(c, p - 1).cast<double>(),
                                  w[static_cast<std::size_t>(p - 1)], w[static_cast<std::size_t>(p)]);
  }
  if (p < c.top()) {
    above = normalized_coboundary(coboundary(c, p).cast<double>(), w[static_cast<std::size_t>(p)],
                                  w[static_cast<std::size_t>(p + 1)]);
  }
  return laplacian_from(below ? &*below : nullptr, above ? &*above : nullptr, c.count(p));
}

int betti(const SimplicialComplex& c, const HodgeStarSet& stars, int p) {
  if (!is_closed(c)) throw Error(ErrorCode::NotClosed, "betti requires a closed complex");
  return kernel_dimension(hodge_laplacian(c, stars, p));
}

std::vector<int> betti_numbers(const SimplicialComplex& c, const HodgeStarSet& stars) {
  std::vector<int> out;
  for (int p = 0; p <= c.top(); ++p) out.push_back(betti(c, stars, p));
  return out;
}

int euler_characteristic(const SimplicialComplex& c) {
  int chi = 0;
  for (int p = 0; p <= c.top(); ++p) {
    chi += (p % 2 == 0 ? 1 : -1) * static_cast<int>(c.count(p));
  }
  return chi;
}

bool is_closed(const SimplicialComplex& c) {
  if (c.top() < 1) return false;
  IntMatrix d = coboundary(c, c.top() - 1);
  std::vector<int> cofaces(static_cast<std::size_t>(c.count(c.top() - 1)), 0);
  for (Index col = 0; col < d.outerSize(); ++col) {
    for (IntMatrix::InnerIterator it(d, col); it; ++it) ++cofaces[static_cast<std::size_t>(it.col())];
  }
  return std::all_of(cofaces.begin(), cofaces.end(), [](int n) { return n == 2; });
}

std::vector<Eigen::Vector3d> barycenters(const SimplicialComplex& c, int p) {
  check_degree(c, p, 0, c.top(), "barycenters");
  std::vector<Eigen::Vector3d> out;
  for (const Simplex& s : c.simplices[static_cast<std::size_t>(p)]) {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const auto& x : unwrapped(c, s)) sum += x;
    out.push_back(sum / static_cast<double>(s.size()));
  }
  return out;
}

namespace {

SimplicialComplex make_cycle(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidInput, "cycle needs at least 3 vertices");
  std::vector<Eigen::Vector3d> v;
  std::vector<Simplex> edges;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    v.emplace_back(std::cos(a), std::sin(a), 0.0);
    edges.push_back({i, (i + 1) % n});
  }
  return SimplicialComplex::from_top_simplices(std::move(v), edges);
}

SimplicialComplex make_octahedron() {
  std::vector<Eigen::Vector3d> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                    {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Simplex> tris;
  for (int a : {0, 1}) {
    for (int b : {2, 3}) {
      for (int z : {4, 5}) tris.push_back({a, b, z});
    }
  }
  return SimplicialComplex::from_top_simplices(std::move(v), tris);
}

SimplicialComplex make_torus_grid(int nx, int ny) {
  if (nx < 3 || ny < 3) throw Error(ErrorCode::InvalidInput, "torus grid needs nx, ny >= 3");
  const double period = 2.0 * M_PI;
  std::vector<Eigen::Vector3d> v;
  auto id = [&](int i, int j) { return ((i + nx) % nx) + nx * ((j + ny) % ny); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) v.emplace_back(period * i / nx, period * j / ny, 0.0);
  }
  std::vector<Simplex> tris;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
    }
  }
  return SimplicialComplex::from_top_simplices(std::move(v), tris, period);
}

SimplicialComplex make_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 6) {
    throw Error(ErrorCode::InvalidInput, "icosphere subdivisions must be in [0, 6]");
  }
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0},
                                    {0, -1, g}, {0, 1, g}, {0, -1, -g}, {0, 1, -g},
                                    {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  std::vector<Simplex> tris;
  for (const auto& f : faces) tris.push_back({f[0], f[1], f[2]});
  return SimplicialComplex::from_top_simplices(std::move(v), tris);
}

}  // namespace

SimplicialComplex generate(const std::string& name, const GeneratorParams& params) {
  SimplicialComplex c;
  if (name == "cycle") {
    c = make_cycle(params.n > 0 ? params.n : 12);
  } else if (name == "octahedron") {
    c = make_octahedron();
  } else if (name == "torus_grid") {
    const int nx = params.nx > 0 ? params.nx : 16;
    c = make_torus_grid(nx, params.ny > 0 ? params.ny : nx);
  } else if (name == "icosphere") {
    c = make_icosphere(params.n > 0 ? params.n : 1);
  } else {
    throw Error(ErrorCode::UnknownCatalogEntry, "unknown complex '" + name + "'");
  }
  if (!is_closed(c)) throw Error(ErrorCode::NotClosed, "generated complex '" + name + "' is not closed");
  return c;
}

}  // namespace witten
