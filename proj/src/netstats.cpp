#include "ept/netstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ept/error.hpp"

namespace ept {

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw DomainError("hurwitz_zeta needs s > 1 and q > 0");
    // Euler-Maclaurin: direct sum of the first N terms, then the integral,
    // half-term and Bernoulli corrections at q + N.
    constexpr int kDirect = 12;
    static constexpr double kB2j[] = {1.0 / 6,   -1.0 / 30, 1.0 / 42,       -1.0 / 30,
                                      5.0 / 66,  -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) sum += std::pow(q + k, -s);
    const double a = q + kDirect;
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    double rising = s;                   // s (s+1) ... (s+2j-2)
    double power = std::pow(a, -s - 1.0);  // a^{-s-2j+1}
    double factorial = 2.0;              // (2j)!
    for (int j = 1; j <= 8; ++j) {
        sum += kB2j[j - 1] / factorial * rising * power;
        rising *= (s + 2 * j - 1) * (s + 2 * j);
        power /= a * a;
        factorial *= (2.0 * j + 1) * (2.0 * j + 2);
    }
    return sum;
}

namespace {

std::vector<std::size_t> positive_sorted(std::span<const std::size_t> degrees) {
    std::vector<std::size_t> v;
    v.reserve(degrees.size());
    for (auto d : degrees)
        if (d >= 1) v.push_back(d);
    std::sort(v.begin(), v.end());
    return v;
}

// KS distance for the sorted tail `tail` (all >= d_min).
double tail_ks(std::span<const std::size_t> tail, double alpha, std::size_t d_min) {
    const double n = static_cast<double>(tail.size());
    const double z0 = hurwitz_zeta(alpha, static_cast<double>(d_min));
    auto fitted_cdf = [&](std::size_t d) { return 1.0 - hurwitz_zeta(alpha, static_cast<double>(d + 1)) / z0; };
    double worst = 0.0;
    double prev_emp = 0.0;
    std::size_t i = 0;
    while (i < tail.size()) {
        const std::size_t x = tail[i];
        std::size_t j = i;
        while (j < tail.size() && tail[j] == x) ++j;
        // Between the previous jump and x the empirical CDF sits at prev_emp
        // while the model keeps rising; the gap is largest just before x.
        if (x > d_min) worst = std::max(worst, std::fabs(fitted_cdf(x - 1) - prev_emp));
        const double emp = static_cast<double>(j) / n;
        worst = std::max(worst, std::fabs(emp - fitted_cdf(x)));
        prev_emp = emp;
        i = j;
    }
    return worst;
}

double mle_alpha(std::span<const std::size_t> tail, std::size_t d_min) {
    const double shift = static_cast<double>(d_min) - 0.5;
    double log_sum = 0.0;
    for (auto d : tail) log_sum += std::log(static_cast<double>(d) / shift);
    return 1.0 + static_cast<double>(tail.size()) / log_sum;
}

}  // namespace

double power_law_ks(std::span<const std::size_t> degrees, double alpha, std::size_t d_min) {
    std::vector<std::size_t> tail;
    for (auto d : degrees)
        if (d >= d_min && d >= 1) tail.push_back(d);
    std::sort(tail.begin(), tail.end());
    if (tail.empty()) return 1.0;
    return tail_ks(tail, alpha, d_min);
}

PowerLawFit fit_power_law(std::span<const std::size_t> degrees) {
    const auto values = positive_sorted(degrees);
    if (values.size() < kMinTailSize)
        throw InsufficientDataError("power-law fit needs at least " + std::to_string(kMinTailSize) +
                                    " positive values, got " + std::to_string(values.size()));
    if (values.front() == values.back())
        throw DegenerateSampleError("power-law fit: all values equal " + std::to_string(values.front()));

    PowerLawFit best;
    best.ks_distance = std::numeric_limits<double>::infinity();
    std::size_t start = 0;
    while (start < values.size()) {
        const std::size_t d_min = values[start];
        const std::size_t n_tail = values.size() - start;
        if (n_tail < kMinTailSize) break;
        std::span<const std::size_t> tail(values.data() + start, n_tail);
        const double alpha = mle_alpha(tail, d_min);
        const double ks = tail_ks(tail, alpha, d_min);
        if (ks < best.ks_distance) {
            best.alpha = alpha;
            best.d_min = d_min;
            best.n_tail = n_tail;
            best.ks_distance = ks;
        }
        while (start < values.size() && values[start] == d_min) ++start;
    }
    best.alpha_stderr = (best.alpha - 1.0) / std::sqrt(static_cast<double>(best.n_tail));
    best.low_confidence = best.n_tail < kLowConfidenceTail;
    return best;
}

ExponentialFit fit_exponential(std::span<const std::size_t> degrees) {
    if (degrees.size() < 2) throw InsufficientDataError("exponential fit needs at least 2 values");
    double sum = 0.0;
    for (auto d : degrees) sum += static_cast<double>(d);
    if (sum == 0.0) throw DegenerateSampleError("exponential fit: all values are zero");
    const double mean = sum / static_cast<double>(degrees.size());
    return {1.0 / mean, mean};
}

double geometric_ks(std::span<const std::size_t> degrees, std::size_t offset) {
    std::vector<std::size_t> v;
    for (auto d : degrees)
        if (d >= offset) v.push_back(d - offset);
    if (v.empty()) throw InsufficientDataError("geometric KS: no values at or above the offset");
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (auto d : v) sum += static_cast<double>(d);
    const double n = static_cast<double>(v.size());
    const double mean = sum / n;
    const double keep = mean / (1.0 + mean);  // failure probability 1 - q
    auto cdf = [&](std::size_t y) { return 1.0 - std::pow(keep, static_cast<double>(y + 1)); };
    double worst = 0.0, prev_emp = 0.0;
    std::size_t i = 0;
    while (i < v.size()) {
        const std::size_t x = v[i];
        std::size_t j = i;
        while (j < v.size() && v[j] == x) ++j;
        if (x > 0) worst = std::max(worst, std::fabs(cdf(x - 1) - prev_emp));
        const double emp = static_cast<double>(j) / n;
        worst = std::max(worst, std::fabs(emp - cdf(x)));
        prev_emp = emp;
        i = j;
    }
    return worst;
}

double ks_critical_5pct(std::size_t n) {
    return 1.358 / std::sqrt(static_cast<double>(n));
}

std::vector<HistogramRow> degree_histogram(std::span<const std::size_t> degrees) {
    std::map<std::size_t, std::size_t> counts;
    for (auto d : degrees) ++counts[d];
    std::vector<HistogramRow> rows;
    rows.reserve(counts.size());
    const double n = static_cast<double>(degrees.size());
    std::size_t at_or_above = degrees.size();
    for (const auto& [degree, count] : counts) {
        rows.push_back({degree, count, static_cast<double>(at_or_above) / n});
        at_or_above -= count;
    }
    return rows;
}

std::vector<HistogramRow> degree_histogram(const DegreeTable& table, DegreeKind kind) {
    return degree_histogram(kind == DegreeKind::In ? table.in_degree : table.out_degree);
}

}  // namespace ept
