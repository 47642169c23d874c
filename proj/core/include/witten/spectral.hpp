#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace witten {

using Index = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Entry = Eigen::Triplet<double>;

/// Real symmetric operator in compressed storage. Immutable once assembled;
/// safe to share across threads.
class SparseSymOperator {
 public:
  SparseSymOperator() = default;

  /// Duplicate (row, col) entries are summed. Rejects entries outside
  /// [0, dim), non-finite values, and asymmetry beyond 1e-12 * max|A|.
  static SparseSymOperator assemble(std::span<const Entry> entries, Index dim);
  static SparseSymOperator from_matrix(const SparseMatrix& matrix);

  Index dim() const { return matrix_.rows(); }
  const SparseMatrix& matrix() const { return matrix_; }

  /// Max absolute row sum; an upper bound on the spectral radius.
  double norm_bound() const { return norm_bound_; }
  double max_abs_entry() const { return max_abs_; }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const { return matrix_ * x; }
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(matrix_); }
  std::vector<Entry> entries() const;

  SparseSymOperator scaled(double factor) const;
  SparseSymOperator shifted(double shift) const;

 private:
  explicit SparseSymOperator(SparseMatrix matrix);

  SparseMatrix matrix_;
  double norm_bound_ = 0.0;
  double max_abs_ = 0.0;
};

enum class SolverMode {
  Auto,         // shift-invert above 400 unknowns for narrow stencils, else shift-free
  ShiftFree,    // block Lanczos on A itself
  ShiftInvert,  // block Lanczos on (A - sigma)^-1, sigma certified below the spectrum
};

/// Auto mode uses shift-invert only up to this many stored entries per row.
inline constexpr Index kShiftInvertRowDensity = 16;

struct SpectrumRequest {
  int k = 1;
  double tol = 1e-9;  // on ||A v - lambda v|| / ||A||
  int max_iterations = 400;  // restart cycles
  std::uint64_t seed = 0x5eedULL;
  SolverMode mode = SolverMode::Auto;
  bool want_vectors = false;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;    // ||A v - lambda v|| / norm_bound
  std::optional<Eigen::MatrixXd> eigenvectors;
  int iterations = 0;
  double scale = 0.0;  // norm bound used for the residual contract
};

/// k smallest eigenpairs by thick-restart block Lanczos with full
/// reorthogonalization. Deterministic for a fixed seed.
/// Throws InvalidRequest for k outside [1, dim) or tol <= 0, and
/// NoConvergence when the residual contract is not met in time.
SpectrumResult smallest_eigs(const SparseSymOperator& op, const SpectrumRequest& req);

/// All eigenvalues, ascending. Intended for small operators only.
std::vector<double> all_eigenvalues(const SparseSymOperator& op);

/// Values at or below this are indistinguishable from zero for an operator
/// whose norm bound is `scale`.
double zero_floor(double scale);

/// Kernel count for an ascending spectrum prefix of a positive semidefinite
/// operator with norm bound `scale`. Returns nullopt when the prefix has not
/// yet reached past the kernel. Throws AmbiguousGap when no relative gap
/// separates a kernel candidate from the rest.
std::optional<int> classify_kernel(std::span<const double> ascending, double scale,
                                   double gap_factor = 1e-6);

/// Number of eigenvalues in the kernel, chosen by relative spectral gap so
/// the count is invariant under positive rescaling of the operator.
/// Throws NegativeSpectrum if the operator is not positive semidefinite.
int kernel_dimension(const SparseSymOperator& op, double gap_factor = 1e-6,
                     std::uint64_t seed = 0x5eedULL);

}  // namespace witten
