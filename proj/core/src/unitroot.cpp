#include "breakgauge/unitroot.hpp"

#include "breakgauge/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace breakgauge {
namespace {

struct AdfFit {
    double tstat;
    double bic;
    std::size_t n_used;
};

// MacKinnon (1991/2010) response-surface coefficients, tau statistics.
struct Surface {
    double inf, c1, c2;
};

Surface surface_for(AdfVariant v, double level) {
    // rows: 1%, 5%, 10%
    static const Surface none_[3] = {{-2.5658, -1.960, -10.04},
                                     {-1.9393, -0.398, 0.0},
                                     {-1.6156, -0.181, 0.0}};
    static const Surface const_[3] = {{-3.4336, -5.999, -29.25},
                                      {-2.8621, -2.738, -8.36},
                                      {-2.5671, -1.438, -4.48}};
    static const Surface trend_[3] = {{-3.9638, -8.353, -47.44},
                                      {-3.4126, -4.039, -17.83},
                                      {-3.1279, -2.418, -7.58}};
    int row = level <= 0.015 ? 0 : level <= 0.075 ? 1 : 2;
    switch (v) {
    case AdfVariant::none: return none_[row];
    case AdfVariant::constant: return const_[row];
    case AdfVariant::constant_and_trend: return trend_[row];
    }
    return const_[row];
}

AdfFit fit_adf(std::span<const double> y, AdfVariant variant, int lags) {
    const int T = static_cast<int>(y.size());
    const int n = T - lags - 1; // usable rows
    int ndet = variant == AdfVariant::none ? 0
               : variant == AdfVariant::constant ? 1 : 2;
    const int p = 1 + lags + ndet;
    if (n <= p) throw ValidationError("adf_test: series too short for lag order");

    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd dy(n);
    for (int r = 0; r < n; ++r) {
        int t = r + lags + 1; // index of dy_t
        dy(r) = y[t] - y[t - 1];
        int c = 0;
        X(r, c++) = y[t - 1];
        for (int i = 1; i <= lags; ++i) X(r, c++) = y[t - i] - y[t - i - 1];
        if (ndet >= 1) X(r, c++) = 1.0;
        if (ndet >= 2) X(r, c++) = static_cast<double>(t);
    }

    Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (!lu.isInvertible())
        throw NumericalError("adf_test: collinear design (constant input?)");
    Eigen::VectorXd beta = lu.solve(X.transpose() * dy);
    Eigen::VectorXd resid = dy - X * beta;
    double ssr = resid.squaredNorm();
    double sigma2 = ssr / (n - p);
    if (sigma2 <= 0.0) throw NumericalError("adf_test: zero residual variance");
    double se = std::sqrt(sigma2 * lu.inverse()(0, 0));

    AdfFit fit;
    fit.tstat = beta(0) / se;
    fit.bic = std::log(ssr / n) + p * std::log(static_cast<double>(n)) / n;
    fit.n_used = static_cast<std::size_t>(n);
    return fit;
}

} // namespace

double adf_critical_value(AdfVariant variant, double level, std::size_t n) {
    Surface s = surface_for(variant, level);
    double t = static_cast<double>(n);
    return s.inf + s.c1 / t + s.c2 / (t * t);
}

AdfResult adf_test(std::span<const double> values, AdfVariant variant, LagRule rule) {
    int max_lags = std::max(rule.k, 0);
    if (static_cast<int>(values.size()) < 25 + max_lags)
        throw ValidationError("adf_test: need at least 25 + max_lags observations");

    int lags = rule.k;
    if (rule.kind == LagRule::Kind::information_criterion) {
        // compare BIC over a common sample (rows of the largest model)
        double best = std::numeric_limits<double>::infinity();
        int skip = max_lags;
        for (int k = 0; k <= max_lags; ++k) {
            auto sub = values.subspan(static_cast<std::size_t>(skip - k));
            AdfFit f = fit_adf(sub, variant, k);
            if (f.bic < best) {
                best = f.bic;
                lags = k;
            }
        }
    }

    AdfFit fit = fit_adf(values, variant, lags);
    AdfResult res;
    res.statistic = fit.tstat;
    res.lags = lags;
    res.variant = variant;
    res.n_used = fit.n_used;
    res.reject_1pct = fit.tstat < adf_critical_value(variant, 0.01, fit.n_used);
    res.reject_5pct = fit.tstat < adf_critical_value(variant, 0.05, fit.n_used);
    res.reject_10pct = fit.tstat < adf_critical_value(variant, 0.10, fit.n_used);
    // downward closure by construction: critical values are ordered
    if (res.reject_1pct) res.reject_5pct = true;
    if (res.reject_5pct) res.reject_10pct = true;
    return res;
}

} // namespace breakgauge
