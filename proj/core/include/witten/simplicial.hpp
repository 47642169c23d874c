#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "witten/spectral.hpp"

namespace witten {

using IntMatrix = Eigen::SparseMatrix<int>;
using Simplex = std::vector<int>;

/// Oriented simplicial complex. Every simplex is stored with ascending vertex
/// indices, which fixes its orientation.
struct SimplicialComplex {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::vector<Simplex>> simplices;  // simplices[p], sorted lexicographically
  // When set, x and y coordinates are periodic with this period (flat torus).
  std::optional<double> period;

  int top() const { return static_cast<int>(simplices.size()) - 1; }
  Index count(int p) const;
  /// Position of a sorted simplex in simplices[p], or -1.
  Index index_of(int p, const Simplex& s) const;

  /// Builds the closure of the given top simplices (any vertex order).
  static SimplicialComplex from_top_simplices(std::vector<Eigen::Vector3d> vertices,
                                              const std::vector<Simplex>& tops,
                                              std::optional<double> period = std::nullopt);
};

/// Diagonal inner-product weights per degree; all strictly positive.
struct HodgeStarSet {
  std::vector<Eigen::VectorXd> weights;
};

/// d_p : C^p -> C^{p+1}. Row = (p+1)-simplex, col = p-simplex, sign (-1)^k
/// for the face that omits the k-th vertex.
IntMatrix coboundary(const SimplicialComplex& complex, int p);

HodgeStarSet combinatorial_stars(const SimplicialComplex& complex);
/// Primal/dual volume ratios from the circumcentric dual (1-D and 2-D).
HodgeStarSet circumcentric_stars(const SimplicialComplex& complex);
void validate_stars(const SimplicialComplex& complex, const HodgeStarSet& stars);

/// d*_p : C^p -> C^{p-1}, the adjoint of d_{p-1} in the star inner products.
SparseMatrix codifferential(const SimplicialComplex& complex, const HodgeStarSet& stars, int p);

/// dd* + d*d on p-cochains, in the orthonormal basis W^{1/2}, where it is
/// symmetric and similar to the weighted operator.
SparseSymOperator hodge_laplacian(const SimplicialComplex& complex, const HodgeStarSet& stars,
                                  int p);

/// W_to^{1/2} d W_from^{-1/2}: a coboundary expressed in orthonormal bases.
SparseMatrix normalized_coboundary(const SparseMatrix& d, const Eigen::VectorXd& w_from,
                                   const Eigen::VectorXd& w_to);
/// below * below^T + above^T * above for orthonormal-basis coboundaries into
/// and out of a degree of dimension `dim`; either may be null.
SparseSymOperator laplacian_from(const SparseMatrix* below, const SparseMatrix* above, Index dim);

int betti(const SimplicialComplex& complex, const HodgeStarSet& stars, int p);
std::vector<int> betti_numbers(const SimplicialComplex& complex, const HodgeStarSet& stars);
int euler_characteristic(const SimplicialComplex& complex);

/// Pseudo-manifold check: every codimension-1 face lies on exactly two top simplices.
bool is_closed(const SimplicialComplex& complex);

/// Barycenters of p-simplices. On a periodic complex vertices are unwrapped
/// around the first vertex before averaging.
std::vector<Eigen::Vector3d> barycenters(const SimplicialComplex& complex, int p);

struct GeneratorParams {
  int n = 0;   // cycle length, icosphere subdivisions
  int nx = 0;  // torus grid
  int ny = 0;
};

/// Catalog complexes: "cycle", "octahedron", "torus_grid", "icosphere".
SimplicialComplex generate(const std::string& name, const GeneratorParams& params = {});

/// ASCII OFF surfaces (triangles only). ParseError messages carry the line.
SimplicialComplex load_off(const std::string& path);
SimplicialComplex parse_off(std::istream& in);
void save_off(const SimplicialComplex& complex, const std::string& path);

}  // namespace witten
