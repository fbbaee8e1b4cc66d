#include "fpt/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fpt/error.hpp"

namespace fpt {

void RunningStats::merge(const RunningStats& other) {
    if (other.n == 0) return;
    if (n == 0) {
        *this = other;
        return;
    }
    const double total = static_cast<double>(n + other.n);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.n) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(other.n) / total;
    n += other.n;
}

EstimateCI to_estimate(const RunningStats& stats) {
    const double se = stats.n > 1 ? std::sqrt(stats.variance() / static_cast<double>(stats.n)) : 0.0;
    return {stats.mean, se, stats.n};
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_coefficient(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }

namespace {

// Stephens' small-sample correction to the asymptotic distribution.
KsResult finish(double statistic, double n_eff) {
    const double root = std::sqrt(n_eff);
    const double lambda = (root + 0.12 + 0.11 / root) * statistic;
    return {statistic, kolmogorov_survival(lambda), ks_critical_coefficient(0.01) / root};
}

}  // namespace

KsResult ks_one_sample_sorted(std::span<const double> sorted, std::span<const double> cdf_at_sorted) {
    if (sorted.empty() || sorted.size() != cdf_at_sorted.size())
        throw InvalidArgument("ks_one_sample needs matching nonempty inputs");
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf_at_sorted[i];
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return finish(d, n);
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    std::vector<double> f(samples.size());
    std::transform(samples.begin(), samples.end(), f.begin(), cdf);
    return ks_one_sample_sorted(samples, f);
}

KsResult ks_two_sample(std::vector<double> first, std::vector<double> second) {
    if (first.empty() || second.empty()) throw InvalidArgument("ks_two_sample needs nonempty samples");
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    const auto n = static_cast<double>(first.size());
    const auto m = static_cast<double>(second.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < first.size() && j < second.size()) {
        const double x = std::min(first[i], second[j]);
        while (i < first.size() && first[i] <= x) ++i;
        while (j < second.size() && second[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return finish(d, n * m / (n + m));
}

}  // namespace fpt
