#include "witten/susy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "witten/error.hpp"

namespace witten {

namespace {

double max_abs(const SparseMatrix& m) {
  double out = 0.0;
  for (Index c = 0; c < m.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) out = std::max(out, std::abs(it.value()));
  }
  return out;
}

}  // namespace

Supercharge supercharge(const DeformedComplex& deformed, double tol) {
  const int top = deformed.top();
  Supercharge out;
  Index total = 0;
  for (int p = 0; p <= top; ++p) {
    out.offsets.push_back(total);
    total += deformed.dim(p);
  }
  std::vector<Entry> q_entries;
  std::vector<Entry> p_entries;
  std::vector<Entry> lap_entries;
  for (int p = 0; p <= top; ++p) {
    const Index base = out.offsets[static_cast<std::size_t>(p)];
    for (Index i = 0; i < deformed.dim(p); ++i) {
      p_entries.emplace_back(static_cast<int>(base + i), static_cast<int>(base + i), p % 2 == 0 ? 1.0 : -1.0);
    }
    if (p < top) {
      const SparseMatrix& d = deformed.dt_orthonormal[static_cast<std::size_t>(p)];
      const Index next = out.offsets[static_cast<std::size_t>(p + 1)];
      for (Index c = 0; c < d.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(d, c); it; ++it) {
          const int r = static_cast<int>(next + it.row());
          const int col = static_cast<int>(base + it.col());
          q_entries.emplace_back(r, col, it.value());
          q_entries.emplace_back(col, r, it.value());
        }
      }
    }
    const SparseMatrix lap = witten_laplacian_dec(deformed, p).matrix();
    for (Index c = 0; c < lap.outerSize(); ++c) {
      for (SparseMatrix::InnerIterator it(lap, c); it; ++it) {
        lap_entries.emplace_back(static_cast<int>(base + it.row()), static_cast<int>(base + it.col()),
                                 it.value());
      }
    }
  }
  out.q.resize(total, total);
  out.q.setFromTriplets(q_entries.begin(), q_entries.end());
  out.grading.resize(total, total);
  out.grading.setFromTriplets(p_entries.begin(), p_entries.end());
  SparseMatrix lap(total, total);
  lap.setFromTriplets(lap_entries.begin(), lap_entries.end());

  const SparseMatrix q2 = out.q * out.q;
  const double lap_scale = std::max(max_abs(lap), std::numeric_limits<double>::min());
  out.square_deviation = max_abs(SparseMatrix(q2 - lap)) / lap_scale;
  const SparseMatrix anti = out.q * out.grading + out.grading * out.q;
  const double q_scale = std::max(max_abs(out.q), std::numeric_limits<double>::min());
  out.grading_deviation = max_abs(anti) / q_scale;
  if (out.square_deviation > tol || out.grading_deviation > tol) {
    std::ostringstream msg;
    msg << "Q^2 deviation " << out.square_deviation << ", {Q,P} deviation " << out.grading_deviation
        << " exceed " << tol;
    throw Error(ErrorCode::IdentityViolation, msg.str());
  }
  return out;
}

GradedSpectrum graded_spectrum(const std::vector<SparseSymOperator>& ops, int k, double t,
                               std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::InvalidRequest, "k must be >= 1");
  GradedSpectrum out;
  out.t = t;
  for (const auto& op : ops) {
    const double scale = op.norm_bound() > 0 ? op.norm_bound() : 1.0;
    out.scales.push_back(scale);
    if (op.dim() <= std::max<Index>(k + 1, 200)) {
      auto all = all_eigenvalues(op);
      const bool complete = static_cast<Index>(k) >= op.dim();
      if (!complete) all.resize(static_cast<std::size_t>(k));
      out.eigenvalues.push_back(std::move(all));
      out.complete.push_back(complete);
      continue;
    }
    SpectrumRequest req;
    req.k = k;
    req.seed = seed;
    out.eigenvalues.push_back(smallest_eigs(op, req).eigenvalues);
    out.complete.push_back(false);
  }
  return out;
}

PairingReport pairing_check(const GradedSpectrum& spectra, double zero_threshold, double match_tol,
                            int count) {
  const std::size_t degrees = spectra.eigenvalues.size();
  if (degrees < 2) {
    throw Error(ErrorCode::InsufficientSpectrum, "pairing needs both even and odd degrees");
  }
  double window = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < degrees; ++p) {
    if (!spectra.complete[p] && !spectra.eigenvalues[p].empty()) {
      window = std::min(window, spectra.eigenvalues[p].back());
    }
  }
  std::vector<double> even;
  std::vector<double> odd;
  for (std::size_t p = 0; p < degrees; ++p) {
    for (double v : spectra.eigenvalues[p]) {
      if (v > zero_threshold) (p % 2 == 0 ? even : odd).push_back(v);
    }
  }
  std::sort(even.begin(), even.end());
  std::sort(odd.begin(), odd.end());
  if (even.empty() || odd.empty()) {
    throw Error(ErrorCode::InsufficientSpectrum, "no nonzero eigenvalues on one side");
  }

  // Values just below the window edge may have partners just above it.
  double cutoff = window * (1.0 - 10.0 * match_tol);
  if (count > 0) {
    std::vector<double> inside;
    for (double v : even) {
      if (v <= cutoff) inside.push_back(v);
    }
    if (static_cast<int>(inside.size()) < count) {
      std::ostringstream msg;
      msg << "only " << inside.size() << " nonzero even eigenvalues below the window " << cutoff
          << ", need " << count;
      throw Error(ErrorCode::InsufficientSpectrum, msg.str());
    }
    cutoff = inside[static_cast<std::size_t>(count - 1)];
  }

  PairingReport out;
  out.window = cutoff;
  std::vector<bool> used(odd.size(), false);
  for (double e : even) {
    if (e > cutoff) break;
    // Nearest unused odd value on either side of e.
    const long n_odd = static_cast<long>(odd.size());
    const long start = std::lower_bound(odd.begin(), odd.end(), e) - odd.begin();
    long lo = start - 1;
    while (lo >= 0 && used[static_cast<std::size_t>(lo)]) --lo;
    long hi = start;
    while (hi < n_odd && used[static_cast<std::size_t>(hi)]) ++hi;
    std::size_t best = odd.size();
    double best_gap = std::numeric_limits<double>::infinity();
    for (long i : {lo, hi}) {
      if (i >= 0 && i < n_odd && std::abs(odd[static_cast<std::size_t>(i)] - e) < best_gap) {
        best_gap = std::abs(odd[static_cast<std::size_t>(i)] - e);
        best = static_cast<std::size_t>(i);
      }
    }
    if (best < odd.size() && best_gap <= match_tol * std::max(e, odd[best])) {
      used[best] = true;
      out.pairs.emplace_back(e, odd[best]);
      out.max_relative_mismatch = std::max(out.max_relative_mismatch, best_gap / std::max(e, odd[best]));
    } else {
      out.unmatched_even.push_back(e);
    }
  }
  // Odd values strictly inside the compared range must all be paired.
  const double odd_limit = cutoff * (1.0 - 10.0 * match_tol);
  for (std::size_t i = 0; i < odd.size(); ++i) {
    if (!used[i] && odd[i] <= odd_limit) out.unmatched_odd.push_back(odd[i]);
  }
  out.pass = out.unmatched_even.empty() && out.unmatched_odd.empty() && !out.pairs.empty();
  return out;
}

LowLyingReport low_lying(const GradedSpectrum& spectra, double t, const SplitRule& rule,
                         const std::optional<std::vector<int>>& kernel_counts) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidInput, "low-lying split needs t > 0");
  const std::size_t degrees = spectra.eigenvalues.size();
  if (kernel_counts && kernel_counts->size() != degrees) {
    throw Error(ErrorCode::LengthMismatch, "kernel counts do not cover every degree");
  }
  LowLyingReport out;
  out.threshold = rule.c * t;
  out.gap_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < degrees; ++p) {
    const auto& ev = spectra.eigenvalues[p];
    const auto above = std::find_if(ev.begin(), ev.end(), [&](double v) { return v >= out.threshold; });
    if (above == ev.end() && !spectra.complete[p]) {
      std::ostringstream msg;
      msg << "degree " << p << ": no computed eigenvalue reaches c*t = " << out.threshold;
      throw Error(ErrorCode::InsufficientSpectrum, msg.str());
    }
    const int cluster = static_cast<int>(above - ev.begin());
    out.cluster.push_back(cluster);
    if (above != ev.end() && cluster > 0) {
      const double below = std::max(ev[static_cast<std::size_t>(cluster - 1)], zero_floor(spectra.scales[p]));
      out.gap_ratio = std::min(out.gap_ratio, *above / below);
    }
    int kappa = 0;
    if (kernel_counts) {
      kappa = (*kernel_counts)[p];
    } else {
      std::vector<double> head(ev.begin(), ev.begin() + std::min<long>(cluster + 1, static_cast<long>(ev.size())));
      auto k = classify_kernel(head, spectra.scales[p]);
      kappa = k ? *k : cluster;
    }
    if (kappa > cluster) {
      std::ostringstream msg;
      msg << "degree " << p << ": kernel count " << kappa << " exceeds cluster size " << cluster;
      throw Error(ErrorCode::InvalidInput, msg.str());
    }
    out.kernel.push_back(kappa);
    out.low_lying.push_back(cluster - kappa);
  }
  if (out.gap_ratio < rule.min_gap_ratio) {
    std::ostringstream msg;
    msg << "gap ratio " << out.gap_ratio << " < " << rule.min_gap_ratio << " at t = " << t
        << "; increase t";
    throw Error(ErrorCode::NoGap, msg.str());
  }
  return out;
}

StrongFromCounts strong_inequalities_from_counts(const LowLyingReport& report,
                                                 const std::vector<int>& beta) {
  if (report.low_lying.size() != beta.size()) {
    throw Error(ErrorCode::LengthMismatch, "low-lying counts and Betti numbers differ in length");
  }
  StrongFromCounts out;
  for (std::size_t p = 0; p < beta.size(); ++p) {
    out.m.push_back(beta[p] + report.low_lying[p]);
    (p % 2 == 0 ? out.even_excess : out.odd_excess) += report.low_lying[p];
  }
  out.strong = check_strong(out.m, beta);
  out.balanced = out.even_excess == out.odd_excess;
  out.pass = out.strong.pass && out.balanced;
  return out;
}

}  // namespace witten
