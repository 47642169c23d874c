#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace witten {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;
using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatrixField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// One coordinate patch of a Morse function.
struct Chart {
  std::string name;
  ScalarField f;
  VectorField grad;
  MatrixField hess;
  Eigen::VectorXd seed_lo;  // box seeded by find_critical_points
  Eigen::VectorXd seed_hi;
  Eigen::VectorXd trust_lo;  // converged points outside are discarded
  Eigen::VectorXd trust_hi;
  // Chart coordinates to a canonical point, used to merge duplicates across charts.
  std::function<Eigen::Vector3d(const Eigen::VectorXd&)> embed;
};

struct MorseFunctionSpec {
  std::string name;
  int dim = 0;
  std::vector<Chart> charts;
  // Chart coordinates are periodic with this period (circle, torus).
  std::optional<double> period;
  // f evaluated at embedded complex coordinates (used to sample on meshes).
  std::function<double(const Eigen::Vector3d&)> ambient;
};

struct CriticalPoint {
  Eigen::VectorXd location;  // chart coordinates, reduced mod period when periodic
  int chart = 0;
  Eigen::Vector3d position;  // canonical embedding
  double value = 0.0;
  Eigen::VectorXd hessian_eigenvalues;  // ascending
  int index = 0;                        // number of negative Hessian eigenvalues
};

struct CriticalSearchStats {
  int seeds = 0;
  int dropped = 0;  // Newton runs that did not converge inside the trusted region
};

inline constexpr double kGradientTolerance = 1e-10;
inline constexpr double kNondegeneracyFloor = 1e-8;
inline constexpr double kDedupDistance = 1e-6;

/// Newton on the gradient from a seed grid of `resolution` points per axis in
/// every chart. Throws DegenerateCritical if a converged point has a Hessian
/// eigenvalue below the nondegeneracy floor.
std::vector<CriticalPoint> find_critical_points(const MorseFunctionSpec& spec, int resolution,
                                                CriticalSearchStats* stats = nullptr);

/// Largest relative mismatch between the analytic gradient/Hessian and
/// central differences at `samples` random points of each chart's seed box.
double derivative_consistency(const MorseFunctionSpec& spec, int samples, std::uint64_t seed);

using MorseCounts = std::vector<int>;

MorseCounts morse_counts(const std::vector<CriticalPoint>& points, int n);

struct InequalityReport {
  std::vector<int> lhs;  // per degree: M_p, or the alternating partial sum of M
  std::vector<int> rhs;  // same for beta
  std::vector<bool> holds;
  bool top_equality = true;  // strong form only: sum (-1)^i M_i == sum (-1)^i beta_i
  bool pass = false;
};

/// M_p >= beta_p for every p.
InequalityReport check_weak(const MorseCounts& m, const std::vector<int>& beta);
/// sum_{i<=q} (-1)^{q-i} M_i >= sum_{i<=q} (-1)^{q-i} beta_i for every q, and
/// equality at the top degree.
InequalityReport check_strong(const MorseCounts& m, const std::vector<int>& beta);

struct PolynomialGap {
  std::vector<long long> q;  // Q(t) coefficients, ascending powers
  bool nonnegative = false;
};

/// Divides N(t) - P(t) = sum (M_i - beta_i) t^i by (1 + t). Throws
/// NonzeroRemainder when the division is not exact.
PolynomialGap polynomial_gap(const MorseCounts& m, const std::vector<int>& beta);

}  // namespace witten
