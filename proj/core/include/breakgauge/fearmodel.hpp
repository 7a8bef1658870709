#pragma once

#include "breakgauge/date.hpp"
#include "breakgauge/hac.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string>
#include <vector>

namespace breakgauge {

/// Regression layout for one market: columns are
/// [1, R_{t-2}, R_{t-1}, R_t, R_{t+1}, R_{t+2}, |R_t|].
struct FearModelDesign {
    std::string market_id;
    Eigen::VectorXd y; // cVIX_t
    Eigen::MatrixXd X; // n x 7
    std::vector<Date> sample_dates;
    bool rank_warning = false; // degenerate regressors flagged at build time

    std::size_t n() const { return static_cast<std::size_t>(y.size()); }
};

struct FearModelEstimate {
    std::string market_id;
    double alpha = 0;
    std::array<double, 5> beta{}; // offsets -2..+2
    double beta_abs = 0;
    Eigen::VectorXd coef, se, tstat; // 7 entries, design column order
    double beta_plus = 0, beta_minus = 0;
    std::vector<double> residuals;
    std::size_t n = 0;
    double bandwidth_used = 0;
};

struct LeadLagCorrelation {
    std::string market_id;
    std::array<int, 5> offsets{-2, -1, 0, 1, 2};
    std::array<double, 5> r{};
    std::array<int, 5> n{};
    std::array<int, 5> stars{}; // 0..3
};

struct AsymmetrySummary {
    double abs_beta_plus = 0, abs_beta_minus = 0;
    int dominant_side = 0; // -1 negative dominates, +1 positive, 0 neither
};

/// Build the lead/lag design on the shared return calendar; dates[t] is the
/// date of return/cVIX observation t. The window interior is trimmed by two
/// observations at each end so every lead and lag exists.
FearModelDesign build_design(std::span<const double> cvix,
                             std::span<const double> returns,
                             std::span<const Date> dates,
                             const std::string& market_id, Date window_start,
                             Date window_end);

/// Exactly-identified GMM (instruments = regressors): point estimates solve
/// the least-squares normal equations; covariance is the HAC sandwich.
FearModelEstimate estimate(const FearModelDesign& design, const KernelSpec& kernel);

LeadLagCorrelation leadlag_correlations(std::span<const double> cvix,
                                        std::span<const double> returns,
                                        const std::string& market_id);

AsymmetrySummary asymmetry_summary(const FearModelEstimate& estimate);

/// Pearson correlation with the t-transform star count (two-sided, n-2 df).
std::pair<double, int> correlation_with_stars(std::span<const double> x,
                                              std::span<const double> y);

} // namespace breakgauge
