#include <algorithm>
#include <cmath>
#include <sstream>

#include "witten/error.hpp"
#include "witten/semiclassical.hpp"

namespace witten {

namespace {

double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const std::optional<double>& period) {
  Eigen::VectorXd d = a - b;
  if (period) {
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] -= *period * std::round(d[i] / *period);
  }
  return d.norm();
}

}  // namespace

double partition_profile(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = bump(2.0 - r);
  return a / (a + bump(r - 1.0));
}

PartitionOfUnity build_partition(const std::vector<Eigen::VectorXd>& points,
                                 const std::vector<Eigen::VectorXd>& centers, double lambda,
                                 std::optional<double> period) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidInput, "lambda must be positive");
  PartitionOfUnity out;
  out.scale = std::pow(lambda, 0.4);
  const double radius = 2.0 / out.scale;
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      const double d = distance(centers[a], centers[b], period);
      if (d < 2.0 * radius) {
        std::ostringstream msg;
        msg << "centers " << a << " and " << b << " are " << d << " apart; supports of radius "
            << radius << " overlap";
        throw Error(ErrorCode::OverlappingSupports, msg.str());
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(n);
  out.j.assign(centers.size() + 1, Eigen::VectorXd::Zero(n));
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = partition_profile(out.scale * distance(points[static_cast<std::size_t>(i)], centers[a], period));
      out.j[a + 1][i] = v;
      sum_sq[i] += v * v;
    }
  }
  out.j[0] = (1.0 - sum_sq.array()).max(0.0).sqrt().matrix();
  return out;
}

namespace {

ImsResult ims_from_diagonals(const SparseSymOperator& h, const std::vector<Eigen::VectorXd>& j) {
  const SparseMatrix& m = h.matrix();
  ImsResult out;
  out.norm = h.norm_bound();
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(h.dim());
  for (const auto& v : j) {
    if (v.size() != h.dim()) throw Error(ErrorCode::LengthMismatch, "partition size differs from operator");
    sum_sq += v.cwiseAbs2();
  }
  out.partition_defect = (sum_sq.array() - 1.0).abs().maxCoeff();
  for (Index c = 0; c < m.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
      const Index r = it.row();
      double localized = 0.0;
      double correction = 0.0;
      for (const auto& v : j) {
        localized += v[r] * it.value() * v[c];
        const double diff = v[r] - v[c];
        correction += diff * diff * it.value();
      }
      out.deviation = std::max(out.deviation, std::abs(localized + 0.5 * correction - it.value()));
    }
  }
  return out;
}

}  // namespace

ImsResult ims_identity_check(const SparseSymOperator& h, const PartitionOfUnity& partition) {
  return ims_from_diagonals(h, partition.j);
}

ImsResult ims_identity_check(const SparseSymOperator& h, const std::vector<SparseMatrix>& partition) {
  std::vector<Eigen::VectorXd> diagonals;
  for (const auto& jm : partition) {
    if (jm.rows() != h.dim() || jm.cols() != h.dim()) {
      throw Error(ErrorCode::LengthMismatch, "partition operator size differs from operator");
    }
    Eigen::VectorXd d = Eigen::VectorXd::Zero(h.dim());
    for (Index c = 0; c < jm.outerSize(); ++c) {
      for (SparseMatrix::InnerIterator it(jm, c); it; ++it) {
        if (it.row() != it.col() && it.value() != 0.0) {
          throw Error(ErrorCode::NonDiagonalPartition, "partition operators must be diagonal");
        }
        if (it.row() == it.col()) d[it.row()] += it.value();
      }
    }
    diagonals.push_back(std::move(d));
  }
  return ims_from_diagonals(h, diagonals);
}

}  // namespace witten
