#include "breakgauge/descstats.hpp"

#include "breakgauge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace breakgauge {

SummaryStats summary(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4) throw ValidationError("summary: need at least 4 observations");

    SummaryStats s;
    s.n = n;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    s.min = *mn;
    s.max = *mx;

    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    if (ss <= 0.0)
        throw NumericalError("summary: zero-variance series, autocorrelation undefined");
    s.stddev = std::sqrt(ss / (n - 1));

    // biased estimator: full-sample denominator
    for (std::size_t k = 1; k <= 3; ++k) {
        double acc = 0.0;
        for (std::size_t t = k; t < n; ++t)
            acc += (values[t] - s.mean) * (values[t - k] - s.mean);
        s.rho[k - 1] = acc / ss;
    }
    return s;
}

double percentile(std::span<const double> sorted, double q) {
    const std::size_t n = sorted.size();
    double h = (n - 1) * q; // 0-based position of the order statistic
    std::size_t i = static_cast<std::size_t>(h);
    if (i + 1 >= n) return sorted[n - 1];
    return sorted[i] + (h - i) * (sorted[i + 1] - sorted[i]);
}

PercentileProfile percentile_profile(std::span<const double> values) {
    if (values.size() < 20)
        throw ValidationError("percentile_profile: need at least 20 observations");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    PercentileProfile prof;
    prof.n = values.size();
    for (int level : {5, 10, 25, 50, 75, 90, 95})
        prof.p[level] = percentile(sorted, level / 100.0);
    prof.normal50 = prof.p[75] - prof.p[25];
    prof.normal90 = prof.p[95] - prof.p[5];
    return prof;
}

StandardizedSeries standardize_excluding_outliers(std::span<const double> values,
                                                  double k) {
    const std::size_t n = values.size();
    if (n < 10)
        throw ValidationError("standardize_excluding_outliers: need >= 10 observations");

    double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / (n - 1));
    if (sd <= 0.0)
        throw NumericalError("standardize_excluding_outliers: zero-variance input");

    double threshold = mean + k * sd;
    StandardizedSeries out;
    std::vector<double> kept;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(values[i]) > threshold)
            out.excluded.push_back(i);
        else
            kept.push_back(values[i]);
    }
    if (kept.size() < 2)
        throw NumericalError("standardize_excluding_outliers: all points excluded");

    double m2 = std::accumulate(kept.begin(), kept.end(), 0.0) / kept.size();
    double ss2 = 0.0;
    for (double v : kept) ss2 += (v - m2) * (v - m2);
    double sd2 = std::sqrt(ss2 / (kept.size() - 1));
    if (sd2 <= 0.0)
        throw NumericalError(
            "standardize_excluding_outliers: zero variance after exclusion");

    out.standardized.reserve(kept.size());
    for (double v : kept) out.standardized.push_back((v - m2) / sd2);
    return out;
}

} // namespace breakgauge
