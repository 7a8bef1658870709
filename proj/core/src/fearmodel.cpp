#include "breakgauge/fearmodel.hpp"

#include "breakgauge/errors.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>

namespace breakgauge {
namespace {

int stars_from_pvalue(double p) {
    if (p < 0.01) return 3;
    if (p < 0.05) return 2;
    if (p < 0.10) return 1;
    return 0;
}

} // namespace

FearModelDesign build_design(std::span<const double> cvix,
                             std::span<const double> returns,
                             std::span<const Date> dates,
                             const std::string& market_id, Date window_start,
                             Date window_end) {
    if (cvix.size() != returns.size() || cvix.size() != dates.size())
        throw ValidationError("build_design: cVIX/returns/dates must be aligned");
    if (!(window_start < window_end))
        throw ValidationError("build_design: window start must precede end");

    // indices inside the window
    std::size_t lo = 0, hi = dates.size();
    while (lo < hi && dates[lo] < window_start) ++lo;
    while (hi > lo && window_end < dates[hi - 1]) --hi;
    if (hi - lo < 5)
        throw ValidationError(market_id + ": window too short (need >= 5 usable)");

    const std::size_t n = hi - lo - 4; // two trimmed at each end
    FearModelDesign d;
    d.market_id = market_id;
    d.y.resize(static_cast<Eigen::Index>(n));
    d.X.resize(static_cast<Eigen::Index>(n), 7);
    d.sample_dates.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t t = lo + 2 + r;
        d.y(static_cast<Eigen::Index>(r)) = cvix[t];
        auto row = d.X.row(static_cast<Eigen::Index>(r));
        row(0) = 1.0;
        row(1) = returns[t - 2];
        row(2) = returns[t - 1];
        row(3) = returns[t];
        row(4) = returns[t + 1];
        row(5) = returns[t + 2];
        row(6) = std::abs(returns[t]);
        d.sample_dates.push_back(dates[t]);
        for (int c = 0; c < 7; ++c)
            if (!std::isfinite(row(c)))
                throw ValidationError(market_id + ": non-finite design entry");
    }

    // flag constant return columns; estimation will reject them properly
    for (int c = 1; c <= 5; ++c) {
        double first = d.X(0, c);
        bool constant = true;
        for (Eigen::Index r = 1; r < d.X.rows() && constant; ++r)
            constant = d.X(r, c) == first;
        if (constant) d.rank_warning = true;
    }
    return d;
}

FearModelEstimate estimate(const FearModelDesign& design, const KernelSpec& kernel) {
    const Eigen::Index n = design.y.size(), p = design.X.cols();
    if (n <= 3 * p)
        throw ValidationError(design.market_id + ": need n > 3 x column count");

    Eigen::MatrixXd xtx = design.X.transpose() * design.X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (!lu.isInvertible())
        throw NumericalError(design.market_id + ": rank-deficient design");
    Eigen::MatrixXd xtx_inv = lu.inverse();
    Eigen::VectorXd coef = xtx_inv * (design.X.transpose() * design.y);
    Eigen::VectorXd resid = design.y - design.X * coef;

    // moment series x_t * e_t
    Eigen::MatrixXd moments = design.X.array().colwise() * resid.array();
    LongRunCovariance s = long_run_covariance(moments, kernel);
    Eigen::MatrixXd cov =
        xtx_inv * (static_cast<double>(n) * s.matrix) * xtx_inv;

    FearModelEstimate est;
    est.market_id = design.market_id;
    est.coef = coef;
    est.se.resize(p);
    est.tstat.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double v = cov(j, j);
        if (v <= 0.0)
            throw NumericalError(design.market_id + ": non-positive coefficient variance");
        est.se(j) = std::sqrt(v);
        est.tstat(j) = coef(j) / est.se(j);
    }
    est.alpha = coef(0);
    for (int i = 0; i < 5; ++i) est.beta[static_cast<std::size_t>(i)] = coef(i + 1);
    est.beta_abs = coef(6);
    est.beta_plus = est.beta[2] + est.beta_abs;
    est.beta_minus = est.beta[2] - est.beta_abs;
    est.residuals.assign(resid.data(), resid.data() + n);
    est.n = static_cast<std::size_t>(n);
    est.bandwidth_used = s.bandwidth_used;
    return est;
}

std::pair<double, int> correlation_with_stars(std::span<const double> x,
                                              std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 10)
        throw ValidationError("correlation: need aligned samples with overlap >= 10");
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw NumericalError("correlation: zero-variance input");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    int stars = 3;
    if (std::abs(r) < 1.0) {
        double t = r * std::sqrt((n - 2) / (1.0 - r * r));
        boost::math::students_t_distribution<double> dist(static_cast<double>(n - 2));
        double p = 2.0 * boost::math::cdf(dist, -std::abs(t));
        stars = stars_from_pvalue(p);
    }
    return {r, stars};
}

LeadLagCorrelation leadlag_correlations(std::span<const double> cvix,
                                        std::span<const double> returns,
                                        const std::string& market_id) {
    if (cvix.size() != returns.size())
        throw ValidationError("leadlag_correlations: sequences must be aligned");
    const int N = static_cast<int>(cvix.size());

    LeadLagCorrelation out;
    out.market_id = market_id;
    for (std::size_t k = 0; k < out.offsets.size(); ++k) {
        int i = out.offsets[k];
        // correlate cvix_t with returns_{t+i} over the maximal overlap
        int lo = std::max(0, -i), hi = std::min(N, N - i);
        if (hi - lo < 10)
            throw ValidationError("leadlag_correlations: insufficient overlap");
        std::vector<double> a, b;
        a.reserve(static_cast<std::size_t>(hi - lo));
        b.reserve(static_cast<std::size_t>(hi - lo));
        for (int t = lo; t < hi; ++t) {
            a.push_back(cvix[static_cast<std::size_t>(t)]);
            b.push_back(returns[static_cast<std::size_t>(t + i)]);
        }
        auto [r, stars] = correlation_with_stars(a, b);
        out.r[k] = r;
        out.n[k] = hi - lo;
        out.stars[k] = stars;
    }
    return out;
}

AsymmetrySummary asymmetry_summary(const FearModelEstimate& estimate) {
    AsymmetrySummary s;
    s.abs_beta_plus = std::abs(estimate.beta_plus);
    s.abs_beta_minus = std::abs(estimate.beta_minus);
    if (s.abs_beta_minus > s.abs_beta_plus)
        s.dominant_side = -1;
    else if (s.abs_beta_plus > s.abs_beta_minus)
        s.dominant_side = 1;
    return s;
}

} // namespace breakgauge
