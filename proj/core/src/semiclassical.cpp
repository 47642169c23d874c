#include "witten/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <tuple>

#include "witten/error.hpp"

namespace witten {

WellData scalar_well(const Eigen::VectorXd& location, const Eigen::MatrixXd& hess_h, double g) {
  // A = ½ Hess h, symmetrized.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.25 * (hess_h + hess_h.transpose()));
  const Eigen::VectorXd a = eig.eigenvalues();
  if (a.minCoeff() <= 0.0) {
    throw Error(ErrorCode::InvalidInput, "well Hessian of h must be positive definite");
  }
  if (!std::isfinite(g)) throw Error(ErrorCode::InvalidInput, "well offset must be finite");
  WellData w;
  w.location = location;
  w.omegas = a.cwiseSqrt();
  w.offset = g;
  return w;
}

WellData form_well(const Eigen::VectorXd& location, const Eigen::MatrixXd& hess_f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (hess_f + hess_f.transpose()));
  Eigen::VectorXd k = eig.eigenvalues().reverse();  // positive directions first
  if (k.cwiseAbs().minCoeff() <= 0.0) throw Error(ErrorCode::DegenerateCritical, "zero Hessian eigenvalue");
  WellData w;
  w.location = location;
  w.kappas = k;
  w.omegas = k.cwiseAbs();
  w.morse_index = static_cast<int>((k.array() < 0.0).count());
  return w;
}

WellData form_well(int mu, const Eigen::VectorXd& omegas) {
  const int n = static_cast<int>(omegas.size());
  if (mu < 0 || mu > n) throw Error(ErrorCode::DegreeOutOfRange, "Morse index outside [0, n]");
  if ((omegas.array() <= 0.0).any()) throw Error(ErrorCode::InvalidInput, "omegas must be positive");
  WellData w;
  w.location = Eigen::VectorXd::Zero(n);
  w.omegas = omegas;
  w.kappas = omegas;
  for (int i = n - mu; i < n; ++i) w.kappas[i] = -omegas[i];
  w.morse_index = mu;
  return w;
}

std::vector<double> ModelSpectrum::values() const {
  std::vector<double> out;
  for (const auto& l : levels) out.push_back(l.value);
  return out;
}

namespace {

struct Node {
  ModelLevel level;
  std::size_t seed = 0;  // which (well, I) start produced it
};

struct Later {
  bool operator()(const Node& a, const Node& b) const {
    return std::tie(a.level.value, a.level.well, a.level.quanta, a.level.form) >
           std::tie(b.level.value, b.level.well, b.level.quanta, b.level.form);
  }
};

// Best-first enumeration over start levels; each quantum in direction i adds
// steps[seed][i] > 0. A tuple is generated only by incrementing directions
// in nondecreasing order, so every tuple appears exactly once and levels
// leave the queue in ascending order.
ModelSpectrum enumerate(std::vector<ModelLevel> starts, const std::vector<Eigen::VectorXd>& steps,
                        int count) {
  if (count < 1) throw Error(ErrorCode::InvalidInput, "count must be >= 1");
  std::priority_queue<Node, std::vector<Node>, Later> queue;
  for (std::size_t s = 0; s < starts.size(); ++s) queue.push(Node{starts[s], s});
  ModelSpectrum out;
  while (static_cast<int>(out.levels.size()) < count && !queue.empty()) {
    Node top = queue.top();
    queue.pop();
    const Eigen::VectorXd& step = steps[top.seed];
    const int n = static_cast<int>(top.level.quanta.size());
    int last = 0;
    for (int i = 0; i < n; ++i) {
      if (top.level.quanta[static_cast<std::size_t>(i)] > 0) last = i;
    }
    for (int i = last; i < n; ++i) {
      Node next = top;
      ++next.level.quanta[static_cast<std::size_t>(i)];
      next.level.value += step[i];
      queue.push(std::move(next));
    }
    out.levels.push_back(std::move(top.level));
  }
  out.complete_below = queue.empty() ? std::numeric_limits<double>::infinity() : queue.top().level.value;
  return out;
}

}  // namespace

ModelSpectrum scalar_model_spectrum(const std::vector<WellData>& wells, int count) {
  if (wells.empty()) throw Error(ErrorCode::InvalidInput, "no wells");
  std::vector<ModelLevel> starts;
  std::vector<Eigen::VectorXd> steps;
  for (std::size_t a = 0; a < wells.size(); ++a) {
    const auto& w = wells[a];
    if (w.omegas.size() == 0 || (w.omegas.array() <= 0.0).any()) {
      throw Error(ErrorCode::InvalidInput, "well frequencies must be positive");
    }
    ModelLevel l;
    l.value = w.omegas.sum() + w.offset;
    l.well = static_cast<int>(a);
    l.quanta.assign(static_cast<std::size_t>(w.omegas.size()), 0);
    starts.push_back(std::move(l));
    steps.push_back(2.0 * w.omegas);
  }
  return enumerate(std::move(starts), steps, count);
}

int gamma(int n, const MultiIndex& I, int mu) {
  if (mu < 0 || mu > n) throw Error(ErrorCode::DegreeOutOfRange, "Morse index outside [0, n]");
  int g = 0;
  for (int i = 1; i <= n; ++i) {
    const bool in_i = std::find(I.begin(), I.end(), i) != I.end();
    const bool in_k = i <= n - mu;
    g += (in_i == in_k) ? 1 : -1;
  }
  return g;
}

ModelSpectrum form_model_spectrum(int n, const std::vector<WellData>& wells, int p, int count) {
  if (n < 1 || n > 6) throw Error(ErrorCode::InvalidInput, "form model spectra support 1 <= n <= 6");
  if (wells.empty()) throw Error(ErrorCode::InvalidInput, "no wells");
  const auto basis = multi_indices(n, p);
  std::vector<ModelLevel> starts;
  std::vector<Eigen::VectorXd> steps;
  for (std::size_t a = 0; a < wells.size(); ++a) {
    const auto& k = wells[a].kappas;
    if (k.size() != n || (k.array() == 0.0).any()) {
      throw Error(ErrorCode::InvalidInput, "form wells need n nonzero Hessian eigenvalues");
    }
    for (const auto& I : basis) {
      ModelLevel l;
      l.value = k.cwiseAbs().sum();
      for (int i = 1; i <= n; ++i) {
        const bool in_i = std::find(I.begin(), I.end(), i) != I.end();
        l.value += (in_i ? 1.0 : -1.0) * k[i - 1];
      }
      l.well = static_cast<int>(a);
      l.quanta.assign(static_cast<std::size_t>(n), 0);
      l.form = I;
      starts.push_back(std::move(l));
      steps.push_back(2.0 * k.cwiseAbs());
    }
  }
  return enumerate(std::move(starts), steps, count);
}

int model_kernel_dimension(const ModelSpectrum& spectrum) {
  double scale = 1.0;
  for (const auto& l : spectrum.levels) scale = std::max(scale, std::abs(l.value));
  return static_cast<int>(std::count_if(spectrum.levels.begin(), spectrum.levels.end(),
                                        [&](const ModelLevel& l) { return std::abs(l.value) <= 1e-12 * scale; }));
}

double grid_coordinate(const BoxDomain& d, int axis, int N, int k) {
  const auto a = static_cast<std::size_t>(axis);
  if (d.periodic) return d.lo[a] + (d.hi[a] - d.lo[a]) * k / N;
  return d.lo[a] + (d.hi[a] - d.lo[a]) * (k + 1) / (N + 1);
}

SparseSymOperator scalar_schrodinger_grid(const BoxDomain& domain, const Potential& h,
                                          const Potential& g, double lambda, int N,
                                          const std::vector<Eigen::VectorXd>& wells) {
  const int n = domain.dim();
  if (n < 1 || n > 2 || domain.hi.size() != domain.lo.size()) {
    throw Error(ErrorCode::InvalidInput, "box domain must be 1- or 2-dimensional");
  }
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidInput, "lambda must be positive");
  if (N < 3) throw Error(ErrorCode::InvalidInput, "grid needs at least 3 points per axis");
  for (int a = 0; a < n; ++a) {
    if (!(domain.hi[static_cast<std::size_t>(a)] > domain.lo[static_cast<std::size_t>(a)])) {
      throw Error(ErrorCode::InvalidInput, "box bounds must satisfy lo < hi");
    }
  }
  if (!domain.periodic) {
    for (const auto& w : wells) {
      for (int a = 0; a < n; ++a) {
        const double lo = domain.lo[static_cast<std::size_t>(a)];
        const double hi = domain.hi[static_cast<std::size_t>(a)];
        const double margin = std::min(w[a] - lo, hi - w[a]);
        if (margin < 0.25 * (hi - lo)) {
          std::ostringstream msg;
          msg << "well at " << w.transpose() << " is " << margin << " from the boundary; need "
              << 0.25 * (hi - lo);
          throw Error(ErrorCode::WellTooCloseToBoundary, msg.str());
        }
      }
    }
  }

  std::vector<double> inv_h2;
  for (int a = 0; a < n; ++a) {
    const double width = domain.hi[static_cast<std::size_t>(a)] - domain.lo[static_cast<std::size_t>(a)];
    const double step = domain.periodic ? width / N : width / (N + 1);
    inv_h2.push_back(1.0 / (step * step));
  }
  const Index total = n == 1 ? N : static_cast<Index>(N) * N;
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(total) * (1 + 2 * static_cast<std::size_t>(n)));
  Eigen::VectorXd x(n);
  for (Index node = 0; node < total; ++node) {
    int idx[2] = {static_cast<int>(node % N), static_cast<int>(node / N)};
    for (int a = 0; a < n; ++a) x[a] = grid_coordinate(domain, a, N, idx[a]);
    const double hv = h(x);
    if (hv < 0.0) throw Error(ErrorCode::InvalidInput, "h must be nonnegative");
    double diag = lambda * lambda * hv + lambda * g(x);
    for (int a = 0; a < n; ++a) {
      diag += 2.0 * inv_h2[static_cast<std::size_t>(a)];
      for (int s : {-1, 1}) {
        int j[2] = {idx[0], idx[1]};
        j[a] += s;
        if (j[a] < 0 || j[a] >= N) {
          if (!domain.periodic) continue;
          j[a] = (j[a] + N) % N;
        }
        const Index col = n == 1 ? j[0] : static_cast<Index>(j[1]) * N + j[0];
        entries.emplace_back(static_cast<int>(node), static_cast<int>(col), -inv_h2[static_cast<std::size_t>(a)]);
      }
    }
    entries.emplace_back(static_cast<int>(node), static_cast<int>(node), diag);
  }
  return SparseSymOperator::assemble(entries, total);
}

int refined_grid_size(int N0, double lambda0, double lambda) {
  if (N0 < 1 || !(lambda0 > 0.0) || !(lambda > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "refinement needs positive N0, lambda0, lambda");
  }
  return std::max(N0, static_cast<int>(std::ceil(N0 * std::sqrt(lambda / lambda0))));
}

ConvergenceTable semiclassical_convergence(const std::function<SparseSymOperator(double)>& family,
                                           const std::vector<double>& model, const std::vector<double>& schedule,
                                           int n_eigs, int skip, std::uint64_t seed) {
  if (n_eigs < 1 || skip < 0) throw Error(ErrorCode::InvalidRequest, "n_eigs must be >= 1");
  if (static_cast<int>(model.size()) < n_eigs) {
    throw Error(ErrorCode::LengthMismatch, "model spectrum shorter than n_eigs");
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i] > schedule[i - 1])) throw Error(ErrorCode::InvalidInput, "schedule must increase");
  }
  ConvergenceTable table;
  std::vector<std::vector<double>> deviations(static_cast<std::size_t>(n_eigs));
  for (double lambda : schedule) {
    const SparseSymOperator op = family(lambda);
    SpectrumRequest req;
    req.k = n_eigs + skip;
    req.seed = seed;
    const auto eigs = smallest_eigs(op, req).eigenvalues;
    for (int i = 0; i < n_eigs; ++i) {
      ConvergenceRow row;
      row.lambda = lambda;
      row.n = i + 1;
      row.ratio = eigs[static_cast<std::size_t>(i + skip)] / lambda;
      row.model = model[static_cast<std::size_t>(i)];
      row.deviation = std::abs(row.ratio - row.model);
      deviations[static_cast<std::size_t>(i)].push_back(row.deviation);
      table.rows.push_back(row);
    }
  }
  for (const auto& d : deviations) {
    bool mono = true;
    for (std::size_t i = 1; i < d.size(); ++i) mono = mono && d[i] < d[i - 1];
    table.monotone.push_back(mono);
  }
  return table;
}

WindowGrowth window_growth_check(const std::function<SparseSymOperator(double)>& family,
                                 const std::vector<double>& schedule, double c) {
  WindowGrowth out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (double lambda : schedule) {
    const SparseSymOperator op = family(lambda);
    SpectrumRequest req;
    req.k = 1;
    req.mode = SolverMode::ShiftFree;
    req.tol = 1e-8;
    const double top = -smallest_eigs(op.scaled(-1.0), req).eigenvalues.front();
    out.lambdas.push_back(lambda);
    out.top.push_back(top);
    out.min_ratio = std::min(out.min_ratio, top / (lambda * lambda));
  }
  out.pass = out.min_ratio >= c;
  return out;
}

}  // namespace witten
