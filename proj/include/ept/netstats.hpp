#pragma once

// Degree-distribution fits: discrete power law for heavy tails (out-degree),
// geometric/exponential for in-degree.

#include <cstddef>
#include <span>
#include <vector>

#include "ept/proof_dag.hpp"

namespace ept {

struct PowerLawFit {
    double alpha = 0.0;
    double alpha_stderr = 0.0;
    std::size_t d_min = 1;
    std::size_t n_tail = 0;
    double ks_distance = 0.0;
    /// Tails shorter than 50 samples give unstable exponents.
    bool low_confidence = false;
};

inline constexpr std::size_t kMinTailSize = 10;
inline constexpr std::size_t kLowConfidenceTail = 50;

/// Discrete maximum-likelihood exponent with the half-integer shift,
///   alpha = 1 + n / sum(ln(d / (d_min - 1/2))),
/// over d >= d_min, where d_min minimises the KS distance between the
/// empirical tail and the fitted discrete power law subject to n_tail >= 10.
/// Zeros are ignored. Throws InsufficientDataError / DegenerateSampleError.
PowerLawFit fit_power_law(std::span<const std::size_t> degrees);

/// Hurwitz zeta(s, q) for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// KS distance between the tail {d >= d_min} of `degrees` and a discrete
/// power law with exponent alpha starting at d_min.
double power_law_ks(std::span<const std::size_t> degrees, double alpha, std::size_t d_min);

struct ExponentialFit {
    double rate = 0.0;
    double mean = 0.0;
};

/// Maximum likelihood: mean = sample mean, rate = 1 / mean.
ExponentialFit fit_exponential(std::span<const std::size_t> degrees);

/// KS distance between `degrees` and a geometric law on {offset, offset+1, ...}
/// with the same mean. Values below `offset` are dropped.
double geometric_ks(std::span<const std::size_t> degrees, std::size_t offset = 0);

/// Two-sided 5% critical value of the one-sample KS statistic, 1.358/sqrt(n).
double ks_critical_5pct(std::size_t n);

struct HistogramRow {
    std::size_t degree = 0;
    std::size_t count = 0;
    double ccdf = 0.0;  // P(D >= degree)
};

/// Rows sorted by degree.
std::vector<HistogramRow> degree_histogram(std::span<const std::size_t> degrees);

enum class DegreeKind { In, Out };
std::vector<HistogramRow> degree_histogram(const DegreeTable& table, DegreeKind kind);

}  // namespace ept
