#include "witten/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "witten/error.hpp"

namespace witten {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// SparseSymOperator

SparseSymOperator::SparseSymOperator(SparseMatrix matrix) : matrix_(std::move(matrix)) {
  matrix_.makeCompressed();
  VectorXd row_sums = VectorXd::Zero(matrix_.rows());
  for (Index c = 0; c < matrix_.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(matrix_, c); it; ++it) {
      row_sums[it.row()] += std::abs(it.value());
      max_abs_ = std::max(max_abs_, std::abs(it.value()));
    }
  }
  norm_bound_ = row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

SparseSymOperator SparseSymOperator::assemble(std::span<const Entry> entries, Index dim) {
  if (dim <= 0) throw Error(ErrorCode::InvalidInput, "operator dimension must be positive");
  for (const auto& e : entries) {
    if (e.row() < 0 || e.col() < 0 || e.row() >= dim || e.col() >= dim) {
      std::ostringstream msg;
      msg << "entry (" << e.row() << "," << e.col() << ") outside dim " << dim;
      throw Error(ErrorCode::IndexOutOfRange, msg.str());
    }
    if (!std::isfinite(e.value())) throw Error(ErrorCode::InvalidInput, "non-finite entry");
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return from_matrix(m);
}

SparseSymOperator SparseSymOperator::from_matrix(const SparseMatrix& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw Error(ErrorCode::InvalidInput, "operator must be square and non-empty");
  }
  SparseMatrix a = matrix;
  a.prune(0.0);
  double max_abs = 0.0;
  for (Index c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      if (!std::isfinite(it.value())) throw Error(ErrorCode::InvalidInput, "non-finite entry");
      max_abs = std::max(max_abs, std::abs(it.value()));
    }
  }
  SparseMatrix at = a.transpose();
  SparseMatrix diff = a - at;
  double asym = 0.0;
  for (Index c = 0; c < diff.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(diff, c); it; ++it) {
      asym = std::max(asym, std::abs(it.value()));
    }
  }
  if (asym > 1e-12 * max_abs) {
    std::ostringstream msg;
    msg << "max|A - A^T| = " << asym << " exceeds 1e-12 * max|A| = " << 1e-12 * max_abs;
    throw Error(ErrorCode::AsymmetricInput, msg.str());
  }
  SparseMatrix sym = 0.5 * (a + at);
  sym.prune(0.0);
  return SparseSymOperator(std::move(sym));
}

std::vector<Entry> SparseSymOperator::entries() const {
  std::vector<Entry> out;
  out.reserve(static_cast<std::size_t>(matrix_.nonZeros()));
  for (Index c = 0; c < matrix_.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(matrix_, c); it; ++it) {
      out.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  return out;
}

SparseSymOperator SparseSymOperator::scaled(double factor) const {
  return SparseSymOperator(SparseMatrix(factor * matrix_));
}

SparseSymOperator SparseSymOperator::shifted(double shift) const {
  SparseMatrix id(dim(), dim());
  id.setIdentity();
  return SparseSymOperator(SparseMatrix(matrix_ + shift * id));
}

// ---------------------------------------------------------------------------
// Block Lanczos engine

namespace {

struct KrylovOptions {
  int want = 1;
  int block = 1;
  int max_basis = 1;
  int max_restarts = 1;
};

struct RitzPairs {
  VectorXd values;
  MatrixXd vectors;
  int restarts = 0;
};

MatrixXd random_block(Index n, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd x(n, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  return x;
}

// Orthonormalizes the columns of `w` against V[:, :cols] and each other
// (classical Gram-Schmidt, two passes) and appends the survivors. Columns
// that collapse are replaced with random directions so the basis keeps
// growing until it spans the whole space.
template <class Apply>
int append_block(MatrixXd& v, MatrixXd& av, int cols, const MatrixXd& w, Apply& apply,
                 std::mt19937_64& rng) {
  const Index n = v.rows();
  const int start = cols;
  const int capacity = static_cast<int>(std::min<Index>(v.cols(), n));
  for (Index j = 0; j < w.cols() && cols < capacity; ++j) {
    VectorXd x = w.col(j);
    bool accepted = false;
    for (int attempt = 0; attempt < 4 && !accepted; ++attempt) {
      double reference = x.norm();
      if (reference == 0.0) {
        x = random_block(n, 1, rng).col(0);
        reference = x.norm();
      }
      for (int pass = 0; pass < 2; ++pass) {
        if (cols > 0) {
          auto basis = v.leftCols(cols);
          x -= basis * (basis.transpose() * x);
        }
      }
      const double norm = x.norm();
      if (norm > 1e-8 * reference) {
        v.col(cols) = x / norm;
        ++cols;
        accepted = true;
      } else {
        x = random_block(n, 1, rng).col(0);
      }
    }
  }
  if (cols > start) {
    av.middleCols(start, cols - start) = apply(MatrixXd(v.middleCols(start, cols - start)));
  }
  return cols;
}

// Thick-restart block Lanczos for the smallest eigenvalues of the symmetric
// operator behind `apply`. `accept` receives the wanted Ritz vectors and
// decides convergence in the caller's own metric.
template <class Apply, class Accept>
RitzPairs block_lanczos(Apply apply, Index n, const KrylovOptions& opt, std::mt19937_64& rng,
                        Accept accept) {
  MatrixXd v(n, opt.max_basis);
  MatrixXd av(n, opt.max_basis);
  int cols = append_block(v, av, 0, random_block(n, opt.block, rng), apply, rng);
  int last_start = 0;

  RitzPairs out;
  for (int restart = 0;; ++restart) {
    while (cols < opt.max_basis && cols < n) {
      const int last_count = cols - last_start;
      MatrixXd next = av.middleCols(last_start, last_count);
      const int before = cols;
      cols = append_block(v, av, cols, next, apply, rng);
      last_start = before;
      if (cols == before) break;
    }

    MatrixXd h = v.leftCols(cols).transpose() * av.leftCols(cols);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
    const VectorXd& theta = eig.eigenvalues();
    const MatrixXd& s = eig.eigenvectors();

    const int want = std::min<int>(opt.want, cols);
    out.values = theta.head(want);
    out.vectors = v.leftCols(cols) * s.leftCols(want);
    out.restarts = restart;
    if (accept(out.vectors) || cols >= n || restart >= opt.max_restarts) return out;

    const int keep = std::max(want, std::min(cols - opt.block, want + opt.block));
    MatrixXd vk = v.leftCols(cols) * s.leftCols(keep);
    MatrixXd avk = av.leftCols(cols) * s.leftCols(keep);
    const int nres = std::min(opt.block, keep);
    MatrixXd residual = avk.leftCols(nres) - vk.leftCols(nres) * theta.head(nres).asDiagonal();
    v.leftCols(keep) = vk;
    av.leftCols(keep) = avk;
    cols = keep;
    last_start = cols;
    cols = append_block(v, av, cols, residual, apply, rng);
    if (cols == last_start) return out;
  }
}

double gershgorin_lower(const SparseMatrix& a) {
  VectorXd diag = VectorXd::Zero(a.rows());
  VectorXd off = VectorXd::Zero(a.rows());
  for (Index c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      if (it.row() == it.col()) {
        diag[it.row()] += it.value();
      } else {
        off[it.row()] += std::abs(it.value());
      }
    }
  }
  return (diag - off).minCoeff();
}

struct Refined {
  VectorXd values;
  MatrixXd vectors;
  VectorXd residuals;
};

// Rayleigh-Ritz of A on span(y); residuals relative to `scale`.
Refined refine(const SparseMatrix& a, const MatrixXd& y_in, double scale) {
  Eigen::HouseholderQR<MatrixXd> qr(y_in);
  MatrixXd y = qr.householderQ() * MatrixXd::Identity(y_in.rows(), y_in.cols());
  MatrixXd ay = a * y;
  MatrixXd h = y.transpose() * ay;
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
  Refined r;
  r.values = eig.eigenvalues();
  r.vectors = y * eig.eigenvectors();
  MatrixXd ar = ay * eig.eigenvectors();
  r.residuals.resize(r.values.size());
  for (Index j = 0; j < r.values.size(); ++j) {
    r.residuals[j] = (ar.col(j) - r.values[j] * r.vectors.col(j)).norm() / scale;
  }
  return r;
}

SpectrumResult lowest_pairs(const SparseSymOperator& op, const SpectrumRequest& req) {
  const Index n = op.dim();
  const SparseMatrix& a = op.matrix();
  const double scale = op.norm_bound() > 0 ? op.norm_bound() : 1.0;
  std::mt19937_64 rng(req.seed);

  const int k = req.k;
  const int block = static_cast<int>(std::min<Index>(n, k + 2));
  SolverMode mode = req.mode;
  if (mode == SolverMode::Auto) {
    // Wide stencils make the sparse factorization fill in badly; plain
    // Lanczos is cheaper there.
    const bool narrow = a.nonZeros() <= kShiftInvertRowDensity * n;
    mode = n > 400 && narrow ? SolverMode::ShiftInvert : SolverMode::ShiftFree;
  }

  Refined best;
  bool have_best = false;
  auto accept = [&](const MatrixXd& y) {
    Refined r = refine(a, y, scale);
    const bool ok = (r.residuals.array() <= req.tol).all();
    if (!have_best || r.residuals.maxCoeff() < best.residuals.maxCoeff() || ok) {
      best = std::move(r);
      have_best = true;
    }
    return ok;
  };

  int iterations = 0;
  if (mode == SolverMode::ShiftFree) {
    KrylovOptions opt;
    opt.want = k;
    opt.block = block;
    opt.max_basis = static_cast<int>(std::min<Index>(n, std::max(10 * block, 300)));
    opt.max_restarts = req.max_iterations;
    auto apply = [&](const MatrixXd& x) -> MatrixXd { return a * x; };
    RitzPairs ritz = block_lanczos(apply, n, opt, rng, accept);
    iterations = ritz.restarts + 1;
  } else {
    // Short shift-free pass to locate the bottom of the spectrum.
    KrylovOptions probe;
    probe.want = static_cast<int>(std::min<Index>(n, k + 1));
    probe.block = block;
    probe.max_basis = static_cast<int>(std::min<Index>(n, std::max(4 * block, 60)));
    probe.max_restarts = 1;
    auto plain = [&](const MatrixXd& x) -> MatrixXd { return a * x; };
    RitzPairs est = block_lanczos(plain, n, probe, rng, [](const MatrixXd&) { return false; });
    const double theta0 = est.values[0];
    const double width = std::max(est.values[est.values.size() - 1] - theta0, 1e-8 * scale);
    const double floor_sigma = gershgorin_lower(a) - 1e-8 * scale;

    SparseMatrix id(n, n);
    id.setIdentity();
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    double delta = 0.05 * width;
    double sigma = theta0 - delta;
    bool factored = false;
    for (int attempt = 0; attempt < 64 && !factored; ++attempt) {
      if (sigma < floor_sigma) sigma = floor_sigma;
      ldlt.compute(a - sigma * id);
      factored = ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0;
      if (!factored) {
        if (sigma == floor_sigma) break;
        delta *= 4.0;
        sigma = theta0 - delta;
      }
    }
    if (!factored) {
      throw Error(ErrorCode::NoConvergence, "could not certify a shift below the spectrum");
    }

    KrylovOptions opt;
    opt.want = k;
    opt.block = block;
    opt.max_basis = static_cast<int>(std::min<Index>(n, std::max(4 * block, block + 3 * k)));
    opt.max_restarts = req.max_iterations;
    auto inverse = [&](const MatrixXd& x) -> MatrixXd { return -ldlt.solve(x); };
    RitzPairs ritz = block_lanczos(inverse, n, opt, rng, accept);
    iterations = ritz.restarts + 1;
  }

  if (!have_best || (best.residuals.array() > req.tol).any()) {
    std::ostringstream msg;
    msg << "after " << iterations << " restart cycles, best residual "
        << (have_best ? best.residuals.maxCoeff() : std::numeric_limits<double>::infinity())
        << " > tol " << req.tol;
    throw Error(ErrorCode::NoConvergence, msg.str());
  }

  SpectrumResult out;
  out.iterations = iterations;
  out.scale = scale;
  out.eigenvalues.assign(best.values.data(), best.values.data() + k);
  out.residuals.assign(best.residuals.data(), best.residuals.data() + k);
  if (req.want_vectors) out.eigenvectors = best.vectors.leftCols(k);
  return out;
}

}  // namespace

SpectrumResult smallest_eigs(const SparseSymOperator& op, const SpectrumRequest& req) {
  if (op.dim() == 0) throw Error(ErrorCode::InvalidRequest, "operator not assembled");
  if (req.k < 1 || req.k >= op.dim()) {
    std::ostringstream msg;
    msg << "k = " << req.k << " must satisfy 1 <= k < dim = " << op.dim();
    throw Error(ErrorCode::InvalidRequest, msg.str());
  }
  if (!(req.tol > 0.0)) throw Error(ErrorCode::InvalidRequest, "tol must be positive");
  if (req.max_iterations < 1) throw Error(ErrorCode::InvalidRequest, "max_iterations < 1");
  return lowest_pairs(op, req);
}

std::vector<double> all_eigenvalues(const SparseSymOperator& op) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(op.to_dense(), Eigen::EigenvaluesOnly);
  const VectorXd& w = eig.eigenvalues();
  return {w.data(), w.data() + w.size()};
}

double zero_floor(double scale) {
  return 1e3 * std::numeric_limits<double>::epsilon() * scale;
}

std::optional<int> classify_kernel(std::span<const double> ascending, double scale,
                                   double gap_factor) {
  const std::size_t n = ascending.size();
  if (n == 0) return std::nullopt;
  const double floor = zero_floor(scale);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::max(ascending[i], 0.0);

  if (v[0] >= 1e3 * floor) return 0;
  for (std::size_t c = 1; c < n; ++c) {
    if (v[c] > floor && v[c - 1] <= gap_factor * v[c]) return static_cast<int>(c);
  }
  if (v[n - 1] <= 1e3 * floor) return std::nullopt;
  std::ostringstream msg;
  msg << "no relative gap >= " << 1.0 / gap_factor << " above the kernel candidates (smallest "
      << v[0] << ", largest computed " << v[n - 1] << ")";
  throw Error(ErrorCode::AmbiguousGap, msg.str());
}

int kernel_dimension(const SparseSymOperator& op, double gap_factor, std::uint64_t seed) {
  const Index n = op.dim();
  if (n == 0) throw Error(ErrorCode::InvalidRequest, "operator not assembled");
  const double scale = op.norm_bound() > 0 ? op.norm_bound() : 1.0;

  auto check_sign = [&](double smallest) {
    if (smallest < -1e-9 * scale) {
      std::ostringstream msg;
      msg << "smallest eigenvalue " << smallest << " < -tol * scale";
      throw Error(ErrorCode::NegativeSpectrum, msg.str());
    }
  };

  if (n <= 64) {
    std::vector<double> w = all_eigenvalues(op);
    check_sign(w.front());
    auto count = classify_kernel(w, scale, gap_factor);
    return count ? *count : static_cast<int>(n);
  }

  int k = static_cast<int>(std::min<Index>(n - 1, 8));
  for (;;) {
    SpectrumRequest req;
    req.k = k;
    req.seed = seed;
    SpectrumResult r = smallest_eigs(op, req);
    check_sign(r.eigenvalues.front());
    auto count = classify_kernel(r.eigenvalues, scale, gap_factor);
    if (count) return *count;
    if (k == n - 1) {
      std::vector<double> w = all_eigenvalues(op);
      auto full = classify_kernel(w, scale, gap_factor);
      return full ? *full : static_cast<int>(n);
    }
    k = static_cast<int>(std::min<Index>(n - 1, 2 * k));
  }
}

}  // namespace witten
