#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "witten/deformation.hpp"
#include "witten/morse.hpp"
#include "witten/spectral.hpp"

namespace witten {

struct Supercharge {
  SparseMatrix q;               // d_t + d_t* on ⊕_p C^p (orthonormal basis)
  SparseMatrix grading;         // (-1)^p
  std::vector<Index> offsets;   // start of each degree block
  double square_deviation = 0;  // max|Q² - ⊕Δ_t| / max|⊕Δ_t|
  double grading_deviation = 0; // max|QP + PQ| / max|Q|
};

/// Block supercharge of a deformed complex. Throws IdentityViolation when
/// either deviation exceeds `tol`.
Supercharge supercharge(const DeformedComplex& deformed, double tol = 1e-10);

/// Lowest eigenvalues per form degree.
struct GradedSpectrum {
  std::vector<std::vector<double>> eigenvalues;  // ascending, per degree
  std::vector<bool> complete;                    // true when the whole spectrum is present
  std::vector<double> scales;                    // norm bound per degree
  double t = 0.0;
};

/// Up to `k` smallest eigenvalues per degree (all of them for small degrees).
GradedSpectrum graded_spectrum(const std::vector<SparseSymOperator>& ops, int k, double t = 0.0,
                               std::uint64_t seed = 0x5eedULL);

struct PairingReport {
  std::vector<std::pair<double, double>> pairs;  // (even, odd)
  std::vector<double> unmatched_even;
  std::vector<double> unmatched_odd;
  double window = 0.0;
  double max_relative_mismatch = 0.0;
  bool pass = false;
};

/// Matches nonzero even-degree eigenvalues with odd-degree ones. Values at or
/// below `zero_threshold` count as zero. With `count > 0` only the first
/// `count` nonzero even values (and odd values below them) are compared.
/// Throws InsufficientSpectrum when one parity is missing or the computed
/// windows do not reach `count` values.
PairingReport pairing_check(const GradedSpectrum& spectra, double zero_threshold,
                            double match_tol = 1e-6, int count = 0);

struct SplitRule {
  double c = 1.0;               // low-lying means below c * t
  double min_gap_ratio = 10.0;  // first value above / last value below
};

struct LowLyingReport {
  std::vector<int> kernel;     // κ_p
  std::vector<int> low_lying;  // ℓ_p
  std::vector<int> cluster;    // κ_p + ℓ_p, eigenvalues below c * t
  double threshold = 0.0;
  double gap_ratio = 0.0;
};

/// Splits each degree's spectrum at c * t. Kernel counts come from
/// `kernel_counts` when given (e.g. from the undeformed complex, whose kernel
/// has the same dimension), otherwise from the relative gap rule.
/// Throws NoGap when the cluster is not separated by `min_gap_ratio`.
LowLyingReport low_lying(const GradedSpectrum& spectra, double t, const SplitRule& rule = {},
                         const std::optional<std::vector<int>>& kernel_counts = std::nullopt);

struct StrongFromCounts {
  MorseCounts m;  // β_p + ℓ_p
  InequalityReport strong;
  int even_excess = 0;
  int odd_excess = 0;
  bool balanced = false;  // even_excess == odd_excess
  bool pass = false;
};

StrongFromCounts strong_inequalities_from_counts(const LowLyingReport& report,
                                                 const std::vector<int>& beta);

}  // namespace witten
