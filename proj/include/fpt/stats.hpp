#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fpt {

/// Streaming mean/variance (Welford), mergeable in a fixed order.
struct RunningStats {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats& other);
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

/// Sample mean with its standard error (sample sd / sqrt n).
struct EstimateCI {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;

    double lower(double z = 3.0) const { return mean - z * std_error; }
    double upper(double z = 3.0) const { return mean + z * std_error; }
    bool covers(double value, double z = 3.0) const { return value >= lower(z) && value <= upper(z); }
};

EstimateCI to_estimate(const RunningStats& stats);

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double critical_1pct = 0.0;

    bool passes(double alpha = 0.01) const { return p_value > alpha; }
};

/// One-sample KS test of `samples` against a continuous distribution function.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// One-sample KS test where the caller supplies the CDF at the sorted samples.
KsResult ks_one_sample_sorted(std::span<const double> sorted, std::span<const double> cdf_at_sorted);

/// Two-sample KS test.
KsResult ks_two_sample(std::vector<double> first, std::vector<double> second);

/// Asymptotic critical value of sqrt(n_eff) D at level alpha.
double ks_critical_coefficient(double alpha);

}  // namespace fpt
