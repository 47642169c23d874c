#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "witten/exterior.hpp"
#include "witten/spectral.hpp"

namespace witten {

/// Harmonic-oscillator data at one well or critical point.
struct WellData {
  Eigen::VectorXd location;
  // Scalar wells: ω_i = sqrt(eig(½ Hess h)). Form wells: signed Hessian
  // eigenvalues κ_i of f, ascending after the positive directions.
  Eigen::VectorXd omegas;
  Eigen::VectorXd kappas;
  double offset = 0.0;  // g(x^a)
  int morse_index = 0;  // number of negative κ_i
};

/// Well of H = -Δ + λ²h + λg from the Hessian of h (positive definite) and g.
WellData scalar_well(const Eigen::VectorXd& location, const Eigen::MatrixXd& hess_h, double g);
/// Critical point of f with Hessian eigenvalues κ (nonzero).
WellData form_well(const Eigen::VectorXd& location, const Eigen::MatrixXd& hess_f);
/// Normalized Morse-coordinate well: κ_i = +ω_i for i <= n - μ, -ω_i after.
WellData form_well(int mu, const Eigen::VectorXd& omegas);

struct ModelLevel {
  double value = 0.0;
  int well = 0;
  std::vector<int> quanta;  // n_i
  MultiIndex form;          // I (form spectra only)
};

struct ModelSpectrum {
  std::vector<ModelLevel> levels;  // ascending; ties by well, then quanta, then I
  // Every level below this value is present.
  double complete_below = 0.0;

  std::vector<double> values() const;
};

/// First `count` values of ⋃_a { Σ ω_i (2 n_i + 1) + g(x^a) }.
ModelSpectrum scalar_model_spectrum(const std::vector<WellData>& wells, int count);

/// γ = |I∩K| - |J∩K| - |I∩L| + |J∩L| with K = {1..n-μ}, L = {n-μ+1..n}, J = complement of I.
int gamma(int n, const MultiIndex& I, int mu);

/// First `count` values (in units of t) of the p-form model operators:
/// Σ_i |κ_i| (2 n_i + 1) + κ_i s_i(I), s_i = +1 for i ∈ I, -1 otherwise.
ModelSpectrum form_model_spectrum(int n, const std::vector<WellData>& wells, int p, int count);

/// Number of zero levels (within 1e-12 relative) in a model spectrum.
int model_kernel_dimension(const ModelSpectrum& spectrum);

// ---------------------------------------------------------------------------
// H(λ) = -Δ + λ² h + λ g on a box grid.

struct BoxDomain {
  std::vector<double> lo;
  std::vector<double> hi;
  bool periodic = false;  // otherwise homogeneous Dirichlet

  int dim() const { return static_cast<int>(lo.size()); }
};

using Potential = std::function<double(const Eigen::VectorXd&)>;

/// Grid coordinates of node k along `axis` for N interior points.
double grid_coordinate(const BoxDomain& domain, int axis, int N, int k);

/// Second-order finite differences, N points per axis. Throws
/// WellTooCloseToBoundary when a well lies within 25% of the box width of a
/// Dirichlet boundary, and InvalidInput for negative h on the grid.
SparseSymOperator scalar_schrodinger_grid(const BoxDomain& domain, const Potential& h,
                                          const Potential& g, double lambda, int N,
                                          const std::vector<Eigen::VectorXd>& wells = {});

/// N scaled with √λ from a reference (λ0, N0), rounded up.
int refined_grid_size(int N0, double lambda0, double lambda);

struct ConvergenceRow {
  double lambda = 0.0;
  int n = 0;  // 1-based level
  double ratio = 0.0;  // E_n(λ) / λ
  double model = 0.0;  // e_n
  double deviation = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // grouped by λ in schedule order
  std::vector<bool> monotone;        // per n: deviation decreases along the schedule
};

/// E_n(λ)/λ against e_n for n = 1..n_eigs. `family(λ)` builds H(λ) (or Δ_t).
/// `skip` leading eigenvalues are dropped first (a known kernel).
ConvergenceTable semiclassical_convergence(const std::function<SparseSymOperator(double)>& family,
                                           const std::vector<double>& model, const std::vector<double>& schedule,
                                           int n_eigs, int skip = 0, std::uint64_t seed = 0x5eedULL);

struct WindowGrowth {
  std::vector<double> lambdas;
  std::vector<double> top;  // largest eigenvalue of H(λ) on the truncated grid
  double min_ratio = 0.0;   // min top / λ²
  bool pass = false;
};

/// The top of the computed spectrum must grow at least like c λ².
WindowGrowth window_growth_check(const std::function<SparseSymOperator(double)>& family,
                                 const std::vector<double>& schedule, double c);

// ---------------------------------------------------------------------------
// Partitions of unity and IMS localization.

/// Smooth profile: 1 on [0,1], 0 on [2,∞), C^∞ in between.
double partition_profile(double r);

struct PartitionOfUnity {
  std::vector<Eigen::VectorXd> j;  // j[0] = J_0 (complement), j[a] = J_a for well a
  double scale = 0.0;              // λ^{2/5}
};

/// J_a(x) = J(λ^{2/5} |x - x^a|), J_0 = sqrt(1 - Σ J_a²) on the given points.
/// Throws OverlappingSupports when two supports (radius 2 λ^{-2/5}) meet.
PartitionOfUnity build_partition(const std::vector<Eigen::VectorXd>& points,
                                 const std::vector<Eigen::VectorXd>& centers, double lambda,
                                 std::optional<double> period = std::nullopt);

struct ImsResult {
  double deviation = 0.0;  // max |Σ J H J + ½ Σ [J,[J,H]] - H|
  double norm = 0.0;       // max absolute row sum of H
  double partition_defect = 0.0;  // max |Σ J² - 1|
};

ImsResult ims_identity_check(const SparseSymOperator& h, const PartitionOfUnity& partition);
/// Same, for partition operators given as sparse matrices; they must be diagonal.
ImsResult ims_identity_check(const SparseSymOperator& h, const std::vector<SparseMatrix>& partition);

}  // namespace witten
