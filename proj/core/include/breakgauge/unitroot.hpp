#pragma once

#include <span>
#include <string>

namespace breakgauge {

enum class AdfVariant { none, constant, constant_and_trend };

/// Lag-order rule for the augmentation terms.
struct LagRule {
    enum class Kind { fixed, information_criterion };
    Kind kind = Kind::fixed;
    int k = 1;

    static LagRule fixed(int lags) { return {Kind::fixed, lags}; }
    static LagRule by_ic(int max_lags) { return {Kind::information_criterion, max_lags}; }
};

struct AdfResult {
    double statistic = 0; // t-ratio on the lagged level
    int lags = 0;
    AdfVariant variant = AdfVariant::constant;
    std::size_t n_used = 0;
    bool reject_1pct = false;
    bool reject_5pct = false;
    bool reject_10pct = false;

    int stars() const { return reject_1pct ? 3 : reject_5pct ? 2 : reject_10pct ? 1 : 0; }
};

/// Augmented Dickey-Fuller regression
///   dy_t = deterministics + gamma*y_{t-1} + sum_i delta_i*dy_{t-i} + e_t
/// with rejection decided against MacKinnon response-surface critical values.
AdfResult adf_test(std::span<const double> values,
                   AdfVariant variant = AdfVariant::constant,
                   LagRule rule = LagRule::fixed(1));

/// MacKinnon finite-sample critical value for the chosen variant;
/// level is one of 0.01, 0.05, 0.10.
double adf_critical_value(AdfVariant variant, double level, std::size_t n);

} // namespace breakgauge
