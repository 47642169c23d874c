#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "witten/morse.hpp"
#include "witten/simplicial.hpp"
#include "witten/spectral.hpp"

namespace witten {

/// Real cochain complex with diagonal inner products: the common shape of
/// simplicial cochains and staggered grid forms.
struct CochainComplex {
  std::vector<SparseMatrix> d;           // d[p] : C^p -> C^{p+1}
  std::vector<Eigen::VectorXd> weights;  // inner-product weights per degree

  int top() const { return static_cast<int>(weights.size()) - 1; }
  Index dim(int p) const { return weights[static_cast<std::size_t>(p)].size(); }
};

CochainComplex cochain_complex(const SimplicialComplex& complex, const HodgeStarSet& stars);

/// d_t = e^{-tf} d e^{tf} per degree, with f sampled once per cell.
struct DeformedComplex {
  double t = 0.0;
  std::vector<SparseMatrix> dt;             // in the cochain basis
  std::vector<SparseMatrix> dt_orthonormal; // W^{1/2} d_t W^{-1/2}
  std::vector<Eigen::VectorXd> weights;

  int top() const { return static_cast<int>(weights.size()) - 1; }
  Index dim(int p) const { return weights[static_cast<std::size_t>(p)].size(); }
};

/// Entry (r, c) of d becomes d_rc * exp(t (f_from[c] - f_to[r])). The
/// exponent is formed per entry, so exp(t f) itself never overflows.
SparseMatrix conjugate_coboundary(const SparseMatrix& d, const Eigen::VectorXd& f_from,
                                  const Eigen::VectorXd& f_to, double t);

/// f sampled at the barycenter of every simplex, per degree.
std::vector<Eigen::VectorXd> sample_barycenters(const SimplicialComplex& complex,
                                                const std::function<double(const Eigen::Vector3d&)>& f);

SparseMatrix deform_coboundary(const SimplicialComplex& complex, const HodgeStarSet& stars,
                               const std::vector<Eigen::VectorXd>& f_values, double t, int p);

DeformedComplex deform(const CochainComplex& base, const std::vector<Eigen::VectorXd>& f_values,
                       double t);
DeformedComplex deform(const SimplicialComplex& complex, const HodgeStarSet& stars,
                       const std::vector<Eigen::VectorXd>& f_values, double t);

/// d_t d_t* + d_t* d_t on degree p, returned in the orthonormal basis.
SparseSymOperator witten_laplacian_dec(const DeformedComplex& deformed, int p);

/// max over p of max|d_t^{(p+1)} d_t^{(p)}| / (max|d_t^{(p+1)}| max|d_t^{(p)}|).
double nilpotency_defect(const DeformedComplex& deformed);

// ---------------------------------------------------------------------------
// Flat periodic grid [0, 2π)^n with N points per axis.
//
// A p-form component dx^I lives on the node lattice shifted by h/2 along the
// axes in I, so d maps each component to its neighbours by a staggered
// difference. Forms are stored component-major: index = c * N^n + node, with
// c the position of I in multi_indices(n, p) and node = sum_k i_k N^k.

struct TorusGrid {
  int n = 1;
  int N = 64;
  int order = 2;  // even order of the staggered difference stencil

  double spacing() const;
  Index nodes() const;
  Index dim(int p) const;
};

void validate_grid(const TorusGrid& grid);

/// Staggered first-derivative weights at offsets (m + 1/2), m = -order/2 .. order/2 - 1.
std::vector<double> staggered_stencil(int order);

/// Chart coordinates of component `c` of a p-form at flat node `node`.
Eigen::VectorXd grid_position(const TorusGrid& grid, int p, int c, Index node);

CochainComplex grid_complex(const TorusGrid& grid);
std::vector<Eigen::VectorXd> grid_samples(const TorusGrid& grid, const MorseFunctionSpec& spec);

/// Δ_t = d_t d_t* + d_t* d_t built from the conjugated grid differential.
SparseSymOperator grid_conjugated_laplacian(const TorusGrid& grid, const MorseFunctionSpec& spec,
                                            double t, int p);

/// Δ + t²|df|² + t Σ_ij f_ij [(a^i)*, a^j], with Δ the componentwise grid
/// Laplacian of the same stencil.
SparseSymOperator grid_witten_laplacian(const TorusGrid& grid, const MorseFunctionSpec& spec,
                                        double t, int p);

}  // namespace witten
