#include "witten/deformation.hpp"

#include <cmath>
#include <sstream>

#include "witten/error.hpp"

namespace witten {

CochainComplex cochain_complex(const SimplicialComplex& complex, const HodgeStarSet& stars) {
  validate_stars(complex, stars);
  CochainComplex out;
  out.weights = stars.weights;
  for (int p = 0; p < complex.top(); ++p) out.d.push_back(coboundary(complex, p).cast<double>());
  return out;
}

SparseMatrix conjugate_coboundary(const SparseMatrix& d, const Eigen::VectorXd& f_from,
                                  const Eigen::VectorXd& f_to, double t) {
  if (f_from.size() != d.cols() || f_to.size() != d.rows()) {
    throw Error(ErrorCode::LengthMismatch, "f samples do not match the coboundary shape");
  }
  if (!f_from.allFinite() || !f_to.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "f is not finite at every cell");
  }
  SparseMatrix out = d;
  for (Index c = 0; c < out.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(out, c); it; ++it) {
      it.valueRef() *= std::exp(t * (f_from[it.col()] - f_to[it.row()]));
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_barycenters(const SimplicialComplex& complex,
                                                const std::function<double(const Eigen::Vector3d&)>& f) {
  std::vector<Eigen::VectorXd> out;
  for (int p = 0; p <= complex.top(); ++p) {
    const auto centers = barycenters(complex, p);
    Eigen::VectorXd v(static_cast<Index>(centers.size()));
    for (std::size_t i = 0; i < centers.size(); ++i) v[static_cast<Index>(i)] = f(centers[i]);
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

void check_samples(const CochainComplex& base, const std::vector<Eigen::VectorXd>& f) {
  if (static_cast<int>(f.size()) != base.top() + 1) {
    throw Error(ErrorCode::LengthMismatch, "need f samples for every degree");
  }
  for (int p = 0; p <= base.top(); ++p) {
    if (f[static_cast<std::size_t>(p)].size() != base.dim(p)) {
      throw Error(ErrorCode::LengthMismatch, "f sample count differs from cell count");
    }
  }
}

}  // namespace

SparseMatrix deform_coboundary(const SimplicialComplex& complex, const HodgeStarSet& stars,
                               const std::vector<Eigen::VectorXd>& f_values, double t, int p) {
  validate_stars(complex, stars);
  SparseMatrix d = coboundary(complex, p).cast<double>();
  if (static_cast<int>(f_values.size()) != complex.top() + 1) {
    throw Error(ErrorCode::LengthMismatch, "need f samples for every degree");
  }
  return conjugate_coboundary(d, f_values[static_cast<std::size_t>(p)],
                              f_values[static_cast<std::size_t>(p + 1)], t);
}

DeformedComplex deform(const CochainComplex& base, const std::vector<Eigen::VectorXd>& f_values,
                       double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidInput, "t must be finite and >= 0");
  check_samples(base, f_values);
  DeformedComplex out;
  out.t = t;
  out.weights = base.weights;
  for (int p = 0; p < base.top(); ++p) {
    const auto sp = static_cast<std::size_t>(p);
    out.dt.push_back(conjugate_coboundary(base.d[sp], f_values[sp], f_values[sp + 1], t));
    out.dt_orthonormal.push_back(
        normalized_coboundary(out.dt.back(), base.weights[sp], base.weights[sp + 1]));
  }
  return out;
}

DeformedComplex deform(const SimplicialComplex& complex, const HodgeStarSet& stars,
                       const std::vector<Eigen::VectorXd>& f_values, double t) {
  return deform(cochain_complex(complex, stars), f_values, t);
}

SparseSymOperator witten_laplacian_dec(const DeformedComplex& deformed, int p) {
  if (p < 0 || p > deformed.top()) {
    std::ostringstream msg;
    msg << "degree " << p << " outside [0, " << deformed.top() << "]";
    throw Error(ErrorCode::DegreeOutOfRange, msg.str());
  }
  const auto sp = static_cast<std::size_t>(p);
  const SparseMatrix* below = p > 0 ? &deformed.dt_orthonormal[sp - 1] : nullptr;
  const SparseMatrix* above = p < deformed.top() ? &deformed.dt_orthonormal[sp] : nullptr;
  return laplacian_from(below, above, deformed.dim(p));
}

double nilpotency_defect(const DeformedComplex& deformed) {
  double worst = 0.0;
  for (std::size_t p = 0; p + 1 < deformed.dt.size(); ++p) {
    const SparseMatrix prod = deformed.dt[p + 1] * deformed.dt[p];
    double num = 0.0;
    for (Index c = 0; c < prod.outerSize(); ++c) {
      for (SparseMatrix::InnerIterator it(prod, c); it; ++it) num = std::max(num, std::abs(it.value()));
    }
    const double a = deformed.dt[p + 1].coeffs().cwiseAbs().maxCoeff();
    const double b = deformed.dt[p].coeffs().cwiseAbs().maxCoeff();
    worst = std::max(worst, num / (a * b));
  }
  return worst;
}

}  // namespace witten
