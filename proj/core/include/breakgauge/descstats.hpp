#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

namespace breakgauge {

/// Moments and low-order autocorrelations of one series.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0, stddev = 0, min = 0, max = 0;
    std::array<double, 3> rho{}; // lags 1..3
};

/// Percentile ladder with the two inter-percentile "normal ranges".
struct PercentileProfile {
    std::size_t n = 0;
    std::map<int, double> p; // levels 5,10,25,50,75,90,95
    double normal50 = 0;     // p75 - p25
    double normal90 = 0;     // p95 - p5
};

struct StandardizedSeries {
    std::vector<double> standardized;    // retained observations, z-scored
    std::vector<std::size_t> excluded;   // indices into the input
};

/// Sample mean/stddev (n-1 denominator), extrema, and biased
/// autocorrelations at lags 1..3.
SummaryStats summary(std::span<const double> values);

/// Percentiles by linear interpolation between order statistics
/// (h = (n-1)q + 1 convention).
PercentileProfile percentile_profile(std::span<const double> values);

/// Two passes: exclude observations with |v| > mean + k*stddev of the full
/// sample, then z-score the retained sample against its own moments.
StandardizedSeries standardize_excluding_outliers(std::span<const double> values,
                                                  double k = 3.0);

double percentile(std::span<const double> sorted_values, double q);

} // namespace breakgauge
