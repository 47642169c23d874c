#include "witten/morse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "witten/error.hpp"

namespace witten {

namespace {

double reduce(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

double periodic_gap(double a, double b, double period) {
  double d = std::abs(a - b);
  return std::min(d, period - d);
}

bool inside(const Eigen::VectorXd& x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

bool same_point(const CriticalPoint& a, const CriticalPoint& b, const MorseFunctionSpec& spec) {
  if (spec.period) {
    double d2 = 0.0;
    for (Eigen::Index i = 0; i < a.location.size(); ++i) {
      const double d = periodic_gap(a.location[i], b.location[i], *spec.period);
      d2 += d * d;
    }
    return std::sqrt(d2) < kDedupDistance;
  }
  return (a.position - b.position).norm() < kDedupDistance;
}

std::optional<Eigen::VectorXd> newton(const Chart& chart, Eigen::VectorXd x,
                                      const std::optional<double>& period) {
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd g = chart.grad(x);
    if (!g.allFinite()) return std::nullopt;
    if (g.norm() <= 1e-3 * kGradientTolerance) break;
    const Eigen::MatrixXd h = chart.hess(x);
    Eigen::VectorXd step = h.completeOrthogonalDecomposition().solve(-g);
    if (!step.allFinite()) return std::nullopt;
    const double len = step.norm();
    if (len > 0.5) step *= 0.5 / len;
    x += step;
    if (period) {
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = reduce(x[i], *period);
    }
    if (len < 1e-15) break;
  }
  if (chart.grad(x).norm() > kGradientTolerance) return std::nullopt;
  return x;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const MorseFunctionSpec& spec, int resolution,
                                                CriticalSearchStats* stats) {
  if (resolution < 1) throw Error(ErrorCode::InvalidInput, "seed grid resolution must be >= 1");
  if (spec.charts.empty()) throw Error(ErrorCode::InvalidInput, "Morse function has no charts");
  CriticalSearchStats local;
  std::vector<CriticalPoint> found;

  for (std::size_t ci = 0; ci < spec.charts.size(); ++ci) {
    const Chart& chart = spec.charts[ci];
    const int n = spec.dim;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= resolution;
    for (long flat = 0; flat < total; ++flat) {
      Eigen::VectorXd seed(n);
      long rest = flat;
      for (int i = 0; i < n; ++i) {
        const long k = rest % resolution;
        rest /= resolution;
        seed[i] = chart.seed_lo[i] +
                  (static_cast<double>(k) + 0.5) * (chart.seed_hi[i] - chart.seed_lo[i]) / resolution;
      }
      ++local.seeds;
      auto x = newton(chart, seed, spec.period);
      if (!x || (!spec.period && !inside(*x, chart.trust_lo, chart.trust_hi))) {
        ++local.dropped;
        continue;
      }
      CriticalPoint cp;
      cp.location = *x;
      cp.chart = static_cast<int>(ci);
      cp.position = chart.embed(*x);
      cp.value = chart.f(*x);
      bool duplicate = false;
      for (const auto& other : found) {
        if (same_point(cp, other, spec)) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(chart.hess(*x));
      cp.hessian_eigenvalues = eig.eigenvalues();
      const double smallest = cp.hessian_eigenvalues.cwiseAbs().minCoeff();
      if (smallest < kNondegeneracyFloor) {
        std::ostringstream msg;
        msg << spec.name << ": degenerate critical point, |Hessian eigenvalue| = " << smallest;
        throw Error(ErrorCode::DegenerateCritical, msg.str());
      }
      cp.index = static_cast<int>((cp.hessian_eigenvalues.array() < 0.0).count());
      found.push_back(std::move(cp));
    }
  }

  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    for (int i = 0; i < 3; ++i) {
      if (a.position[i] != b.position[i]) return a.position[i] < b.position[i];
    }
    return a.value < b.value;
  });
  if (stats) *stats = local;
  return found;
}

double derivative_consistency(const MorseFunctionSpec& spec, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  const double h = 1e-5;
  for (const Chart& chart : spec.charts) {
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd x(spec.dim);
      for (int i = 0; i < spec.dim; ++i) {
        x[i] = chart.seed_lo[i] + unit(rng) * (chart.seed_hi[i] - chart.seed_lo[i]);
      }
      const Eigen::VectorXd g = chart.grad(x);
      const Eigen::MatrixXd hs = chart.hess(x);
      Eigen::VectorXd g_fd(spec.dim);
      Eigen::MatrixXd h_fd(spec.dim, spec.dim);
      for (int i = 0; i < spec.dim; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(spec.dim);
        e[i] = h;
        g_fd[i] = (chart.f(x + e) - chart.f(x - e)) / (2 * h);
        h_fd.col(i) = (chart.grad(x + e) - chart.grad(x - e)) / (2 * h);
      }
      // Relative to the local magnitude, with a floor of 1 so zeros compare absolutely.
      worst = std::max(worst, (g - g_fd).norm() / std::max(1.0, g.norm()));
      worst = std::max(worst, (hs - h_fd).norm() / std::max(1.0, hs.norm()));
    }
  }
  return worst;
}

MorseCounts morse_counts(const std::vector<CriticalPoint>& points, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidInput, "dimension must be nonnegative");
  MorseCounts m(static_cast<std::size_t>(n + 1), 0);
  for (const auto& p : points) {
    if (p.index < 0 || p.index > n) throw Error(ErrorCode::IndexOutOfRange, "Morse index exceeds dimension");
    ++m[static_cast<std::size_t>(p.index)];
  }
  return m;
}

namespace {

void check_lengths(const MorseCounts& m, const std::vector<int>& beta) {
  if (m.size() != beta.size() || m.empty()) {
    std::ostringstream msg;
    msg << "M has " << m.size() << " entries, beta has " << beta.size();
    throw Error(ErrorCode::LengthMismatch, msg.str());
  }
}

}  // namespace

InequalityReport check_weak(const MorseCounts& m, const std::vector<int>& beta) {
  check_lengths(m, beta);
  InequalityReport r;
  r.lhs = m;
  r.rhs = beta;
  r.pass = true;
  for (std::size_t p = 0; p < m.size(); ++p) {
    r.holds.push_back(m[p] >= beta[p]);
    r.pass = r.pass && r.holds.back();
  }
  return r;
}

InequalityReport check_strong(const MorseCounts& m, const std::vector<int>& beta) {
  check_lengths(m, beta);
  InequalityReport r;
  int sm = 0;
  int sb = 0;
  r.pass = true;
  for (std::size_t q = 0; q < m.size(); ++q) {
    sm = m[q] - sm;
    sb = beta[q] - sb;
    r.lhs.push_back(sm);
    r.rhs.push_back(sb);
    r.holds.push_back(sm >= sb);
    r.pass = r.pass && r.holds.back();
  }
  r.top_equality = sm == sb;
  r.pass = r.pass && r.top_equality;
  return r;
}

PolynomialGap polynomial_gap(const MorseCounts& m, const std::vector<int>& beta) {
  check_lengths(m, beta);
  const std::size_t n = m.size() - 1;
  PolynomialGap out;
  long long prev = 0;
  for (std::size_t k = 0; k < n; ++k) {
    prev = static_cast<long long>(m[k]) - beta[k] - prev;
    out.q.push_back(prev);
  }
  const long long remainder = static_cast<long long>(m[n]) - beta[n] - prev;
  if (remainder != 0) {
    std::ostringstream msg;
    msg << "(N - P)(t) is not divisible by 1 + t: remainder " << remainder;
    throw Error(ErrorCode::NonzeroRemainder, msg.str());
  }
  out.nonnegative = std::all_of(out.q.begin(), out.q.end(), [](long long c) { return c >= 0; });
  return out;
}

}  // namespace witten
