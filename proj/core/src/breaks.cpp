#include "breakgauge/breaks.hpp"

#include "breakgauge/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace breakgauge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Null quantiles of sup-F(m|0), UDmax and the sequential F(l+1|l) tests for
// the mean-shift model (one regressor), obtained by Monte Carlo simulation
// of the null distribution (T = 400, 6000 replications) at each trimming.
// Levels are 90% / 95% / 99%.
struct CvRow {
    double q90, q95, q99;
};

constexpr double kTrims[] = {0.10, 0.15, 0.20, 0.25};
constexpr int kMaxM[] = {5, 5, 4, 3};

constexpr CvRow kSupF[4][5] = {
    // trim 0.10, m = 1..5
    {{7.5515, 9.1671, 12.7971},
     {6.9419, 8.0143, 10.2491},
     {6.0844, 6.8639, 8.5146},
     {5.4339, 6.0560, 7.3845},
     {4.8579, 5.3999, 6.6381}},
    // trim 0.15
    {{7.0864, 8.5915, 12.1981},
     {6.1731, 7.2380, 9.4224},
     {5.2286, 6.0317, 7.6009},
     {4.3955, 4.9720, 6.2787},
     {3.3640, 3.8505, 4.8152}},
    // trim 0.20 (m = 5 infeasible)
    {{6.6946, 8.1783, 11.8170},
     {5.5184, 6.5197, 8.6764},
     {4.2902, 5.0768, 6.5894},
     {2.0073, 2.5136, 3.4883},
     {0, 0, 0}},
    // trim 0.25 (m >= 4 infeasible)
    {{6.2890, 7.7004, 11.3383},
     {4.7136, 5.6868, 7.9126},
     {2.1255, 2.5909, 3.8233},
     {0, 0, 0},
     {0, 0, 0}},
};

constexpr CvRow kUdmax[4] = {
    {8.1390, 9.5139, 12.8149},
    {7.5351, 8.9241, 12.3681},
    {7.0342, 8.3326, 11.8226},
    {6.4640, 7.8646, 11.3389},
};

constexpr CvRow kSeqF[4][4] = {
    // trim 0.10, l = 1..4
    {{9.0319, 10.6053, 14.7838},
     {9.9615, 11.5185, 15.8356},
     {10.5579, 12.0656, 16.4840},
     {11.0507, 12.7482, 17.1773}},
    // trim 0.15
    {{8.5263, 10.1396, 14.4045},
     {9.4471, 11.2145, 15.5596},
     {10.1230, 11.8361, 15.8778},
     {10.6047, 12.1856, 16.4861}},
    // trim 0.20
    {{8.1465, 9.7792, 13.7796},
     {9.0282, 10.5136, 14.7937},
     {9.7243, 11.3243, 15.8514},
     {10.1262, 11.7796, 16.4861}},
    // trim 0.25
    {{7.5851, 9.2648, 13.0468},
     {8.3909, 10.1244, 14.3575},
     {9.2204, 10.6515, 15.5000},
     {9.6434, 11.3297, 15.9920}},
};

int trim_row(double trimming) {
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(kTrims[i] - trimming) < std::abs(kTrims[best] - trimming))
            best = i;
    return best;
}

double pick(const CvRow& row, double level) {
    if (level >= 0.985) return row.q99;
    if (level >= 0.935) return row.q95;
    return row.q90;
}

int stars_for(double stat, double q90, double q95, double q99) {
    if (stat > q99) return 3;
    if (stat > q95) return 2;
    if (stat > q90) return 1;
    return 0;
}

int min_segment(double trimming, int T) {
    if (trimming <= 0.0 || trimming >= 0.5)
        throw ValidationError("breaks: trimming must be in (0, 0.5)");
    int L = static_cast<int>(std::ceil(trimming * T));
    if (L < 2) throw ValidationError("breaks: trimming gives segments shorter than 2");
    return L;
}

int feasible_max_breaks(int requested, double trimming, int L, int T) {
    int by_trim = static_cast<int>(std::floor(1.0 / trimming)) - 1;
    int by_len = T / L - 1;
    return std::clamp(std::min(by_trim, by_len), 0, requested);
}

// suffix DP: H[k][t] = min SSR of segmenting observations t..T-1 into k
// segments, each of length >= L
std::vector<std::vector<double>> suffix_dp(const SegmentCostTable& tab, int segments) {
    const int T = tab.size();
    const int L = tab.min_segment_length();
    std::vector<std::vector<double>> H(segments + 1,
                                       std::vector<double>(T + 1, kInf));
    for (int t = 0; t + L <= T; ++t) H[1][t] = tab.cost(t, T - 1);
    for (int k = 2; k <= segments; ++k) {
        for (int t = 0; t + k * L <= T; ++t) {
            double best = kInf;
            for (int e = t + L - 1; e + (k - 1) * L < T; ++e) {
                double v = tab.cost(t, e) + H[k - 1][e + 1];
                if (v < best) best = v;
            }
            H[k][t] = best;
        }
    }
    return H;
}

// long-run variance of a residual vector; zero-variance inputs map to 0
double residual_lrv(const std::vector<double>& resid, const KernelSpec& kernel) {
    double ss = 0.0;
    for (double r : resid) ss += r * r;
    if (ss / resid.size() < 1e-18) return 0.0;
    return long_run_variance(resid, kernel);
}

std::vector<int> regime_bounds(const BreakModel& model) {
    std::vector<int> b;
    b.push_back(0);
    for (int idx : model.break_indices) b.push_back(idx);
    b.push_back(model.T);
    return b;
}

// HAC-robust (or homoscedastic) Wald form of the sup-F statistic for the
// mean-shift model evaluated at a fitted segmentation
double wald_f_stat(std::span<const double> values, const BreakModel& model,
                   bool hac_robust, const KernelSpec& kernel) {
    const int m = static_cast<int>(model.break_indices.size());
    const int T = model.T;
    auto bounds = regime_bounds(model);

    Eigen::VectorXd v(m + 1);
    double sigma2 = model.ssr / T;
    for (int j = 0; j <= m; ++j) {
        int n_j = bounds[j + 1] - bounds[j];
        if (hac_robust) {
            std::vector<double> resid;
            resid.reserve(n_j);
            for (int t = bounds[j]; t < bounds[j + 1]; ++t)
                resid.push_back(values[t] - model.regime_means[j]);
            v(j) = residual_lrv(resid, kernel) / n_j;
        } else {
            v(j) = sigma2 / n_j;
        }
    }

    Eigen::VectorXd d(m);
    for (int j = 0; j < m; ++j)
        d(j) = model.regime_means[j + 1] - model.regime_means[j];
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        C(j, j) = v(j) + v(j + 1);
        if (j + 1 < m) C(j, j + 1) = C(j + 1, j) = -v(j + 1);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    if (!lu.isInvertible()) return kInf; // degenerate (e.g. noiseless step)
    double quad = d.dot(lu.solve(d));
    return (static_cast<double>(T - (m + 1)) / (static_cast<double>(T) * m)) * quad;
}

// SSR-minimizing single break of a sub-range [lo, hi) with both parts >= L;
// returns the in-range break offset or -1 when infeasible
int best_single_break(const SegmentCostTable& tab, int lo, int hi, int L) {
    int best = -1;
    double best_ssr = kInf;
    for (int b = lo + L; b + L <= hi; ++b) {
        double ssr = tab.cost(lo, b - 1) + tab.cost(b, hi - 1);
        if (ssr < best_ssr) {
            best_ssr = ssr;
            best = b;
        }
    }
    return best;
}

BreakModel model_from_breaks(const SegmentCostTable& tab,
                             std::span<const double> values,
                             const std::vector<int>& breaks) {
    BreakModel model;
    model.T = static_cast<int>(values.size());
    model.break_indices = breaks;
    std::vector<int> bounds;
    bounds.push_back(0);
    for (int b : breaks) bounds.push_back(b);
    bounds.push_back(model.T);
    model.ssr = 0.0;
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
        model.regime_means.push_back(tab.mean(bounds[j], bounds[j + 1] - 1));
        model.ssr += tab.cost(bounds[j], bounds[j + 1] - 1);
    }
    return model;
}

} // namespace

SegmentCostTable::SegmentCostTable(std::span<const double> values, double trimming)
    : SegmentCostTable(values, min_segment(trimming, static_cast<int>(values.size()))) {}

SegmentCostTable::SegmentCostTable(std::span<const double> values,
                                   int min_segment_length) {
    const int T = static_cast<int>(values.size());
    min_len_ = min_segment_length;
    if (min_len_ < 2)
        throw ValidationError("SegmentCostTable: minimal segment length must be >= 2");
    if (T < 2 * min_len_)
        throw ValidationError("SegmentCostTable: series too short for trimming");
    sum_.resize(T + 1, 0.0);
    sumsq_.resize(T + 1, 0.0);
    for (int t = 0; t < T; ++t) {
        sum_[t + 1] = sum_[t] + values[t];
        sumsq_[t + 1] = sumsq_[t] + values[t] * values[t];
    }
}

BreakModel global_minimizer(std::span<const double> values, int m, double trimming) {
    if (m < 1) throw ValidationError("global_minimizer: need m >= 1");
    SegmentCostTable tab(values, trimming);
    const int T = tab.size();
    const int L = tab.min_segment_length();
    if ((m + 1) * L > T)
        throw ValidationError("global_minimizer: infeasible (m, trimming, T)");

    auto H = suffix_dp(tab, m + 1);
    if (!std::isfinite(H[m + 1][0]))
        throw ValidationError("global_minimizer: infeasible segmentation");

    // forward reconstruction; choosing the smallest feasible end at every
    // step yields the lexicographically smallest break sequence
    std::vector<int> breaks;
    int t = 0;
    for (int k = m + 1; k >= 2; --k) {
        const double target = H[k][t];
        for (int e = t + L - 1; e + (k - 1) * L < T; ++e) {
            if (tab.cost(t, e) + H[k - 1][e + 1] == target) {
                breaks.push_back(e + 1);
                t = e + 1;
                break;
            }
        }
    }
    if (static_cast<int>(breaks.size()) != m)
        throw NumericalError("global_minimizer: reconstruction failed");
    return model_from_breaks(tab, values, breaks);
}

std::vector<double> min_ssr_by_breaks(std::span<const double> values, int max_m,
                                      double trimming) {
    SegmentCostTable tab(values, trimming);
    const int T = tab.size();
    const int L = tab.min_segment_length();
    auto H = suffix_dp(tab, max_m + 1);
    std::vector<double> out;
    for (int m = 0; m <= max_m && (m + 1) * L <= T; ++m) out.push_back(H[m + 1][0]);
    return out;
}

double sup_f_test(std::span<const double> values, int l, double trimming,
                  bool hac_robust, const KernelSpec& kernel) {
    SegmentCostTable tab(values, trimming);
    const int T = tab.size();
    const int L = tab.min_segment_length();

    if (l == 0) {
        int b = best_single_break(tab, 0, T, L);
        if (b < 0) throw NumericalError("sup_f_test: no admissible break position");
        return wald_f_stat(values, model_from_breaks(tab, values, {b}), hac_robust,
                           kernel);
    }

    BreakModel null_model = global_minimizer(values, l, trimming);
    auto bounds = regime_bounds(null_model);
    double best = -kInf;
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
        int lo = bounds[j], hi = bounds[j + 1];
        if (hi - lo < 2 * L) continue;
        int b = best_single_break(tab, lo, hi, L);
        if (b < 0) continue;
        auto seg = values.subspan(static_cast<std::size_t>(lo),
                                  static_cast<std::size_t>(hi - lo));
        SegmentCostTable seg_tab(seg, L);
        best = std::max(best, wald_f_stat(seg, model_from_breaks(seg_tab, seg, {b - lo}),
                                          hac_robust, kernel));
    }
    if (best == -kInf)
        throw NumericalError("sup_f_test: no segment admits an extra break");
    return best;
}

StatWithStars udmax_test(std::span<const double> values, int max_breaks,
                         double trimming, bool hac_robust, const KernelSpec& kernel) {
    SegmentCostTable tab(values, trimming);
    const int T = tab.size();
    const int L = tab.min_segment_length();
    int M = feasible_max_breaks(max_breaks, trimming, L, T);
    if (M < 1) throw ValidationError("udmax_test: no feasible break count");

    double stat = -kInf;
    for (int m = 1; m <= M; ++m) {
        BreakModel model = global_minimizer(values, m, trimming);
        stat = std::max(stat, wald_f_stat(values, model, hac_robust, kernel));
    }
    int row = trim_row(trimming);
    return {stat, stars_for(stat, kUdmax[row].q90, kUdmax[row].q95, kUdmax[row].q99)};
}

LwzSelection lwz_select(std::span<const double> values, int max_breaks,
                        double trimming) {
    const double c0 = 0.299, delta0 = 0.1;
    SegmentCostTable tab(values, trimming);
    const int T = tab.size();
    const int L = tab.min_segment_length();
    int M = feasible_max_breaks(max_breaks, trimming, L, T);

    auto ssr = min_ssr_by_breaks(values, M, trimming);
    LwzSelection sel;
    double penalty_unit = c0 * std::pow(std::log(static_cast<double>(T)), 2.0 + delta0) /
                          static_cast<double>(T);
    double best = kInf;
    for (int m = 0; m < static_cast<int>(ssr.size()); ++m) {
        int p = 2 * m + 1; // m+1 means and m break dates
        if (ssr[m] <= 0.0) {
            // exact fit: criterion is -inf; the smallest such m wins
            sel.lwz_by_m[m] = -kInf;
            if (-kInf < best) {
                best = -kInf;
                sel.selected_m = m;
            }
            continue;
        }
        double lwz = std::log(ssr[m] / (T - p)) + p * penalty_unit;
        sel.lwz_by_m[m] = lwz;
        if (lwz < best) {
            best = lwz;
            sel.selected_m = m;
        }
    }
    return sel;
}

double break_date_quantile(double coverage) {
    if (coverage <= 0.0 || coverage >= 1.0)
        throw ValidationError("break_date_quantile: coverage must be in (0,1)");
    // cdf of V = argmax_s {W(s) - |s|/2} (Bai, 1997):
    // G(x) = 1 + sqrt(x/2pi) e^{-x/8} - (x+5)/2 Phi(-sqrt(x)/2)
    //        + 3/2 e^x Phi(-3 sqrt(x)/2),  x >= 0
    auto phi_neg = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
    auto cdf = [&](double x) {
        double sx = std::sqrt(x);
        double g = 1.0 + std::sqrt(x / (2.0 * M_PI)) * std::exp(-x / 8.0) -
                   0.5 * (x + 5.0) * phi_neg(0.5 * sx) +
                   1.5 * std::exp(x) * phi_neg(1.5 * sx);
        return 2.0 * g - 1.0; // two-sided, by symmetry
    };
    double lo = 0.0, hi = 200.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (cdf(mid) < coverage ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<BreakInterval> break_confidence_intervals(
    std::span<const double> values, const BreakModel& model,
    std::span<const Date> dates, const KernelSpec& kernel) {
    if (model.break_indices.empty())
        throw ValidationError("break_confidence_intervals: model has no breaks");
    if (dates.size() != values.size())
        throw ValidationError("break_confidence_intervals: dates/values mismatch");
    auto bounds = regime_bounds(model);
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j)
        if (bounds[j + 1] - bounds[j] < 5)
            throw ValidationError("break_confidence_intervals: regime shorter than 5");

    const double c90 = break_date_quantile(0.90);
    const double c95 = break_date_quantile(0.95);
    const int T = model.T;

    std::vector<BreakInterval> out;
    for (std::size_t i = 0; i < model.break_indices.size(); ++i) {
        double delta = model.regime_means[i + 1] - model.regime_means[i];
        if (delta == 0.0)
            throw NumericalError(
                "break_confidence_intervals: zero mean shift between regimes");

        // long-run variance of residuals across the two adjacent regimes
        std::vector<double> resid;
        for (int t = bounds[i]; t < bounds[i + 2]; ++t) {
            int j = t < bounds[i + 1] ? static_cast<int>(i) : static_cast<int>(i) + 1;
            resid.push_back(values[t] - model.regime_means[j]);
        }
        double lrv = residual_lrv(resid, kernel);
        double scale = lrv / (delta * delta);

        BreakInterval bi;
        bi.break_index = model.break_indices[i];
        int b0 = bi.break_index - 1; // 0-based last observation of the regime
        bi.date = dates[b0];
        auto clip = [&](int t) { return std::clamp(t, 0, T - 1); };
        int hw90 = static_cast<int>(std::ceil(c90 * scale));
        int hw95 = static_cast<int>(std::ceil(c95 * scale));
        bi.lo90_index = clip(b0 - hw90);
        bi.hi90_index = clip(b0 + hw90);
        bi.lo95_index = clip(b0 - hw95);
        bi.hi95_index = clip(b0 + hw95);
        bi.lo90 = dates[bi.lo90_index];
        bi.hi90 = dates[bi.hi90_index];
        bi.lo95 = dates[bi.lo95_index];
        bi.hi95 = dates[bi.hi95_index];
        out.push_back(bi);
    }
    return out;
}

double supf_critical_value(double trimming, int m, double level) {
    int row = trim_row(trimming);
    if (m < 1 || m > kMaxM[row])
        throw ValidationError("supf_critical_value: infeasible m for this trimming");
    return pick(kSupF[row][m - 1], level);
}

double udmax_critical_value(double trimming, double level) {
    return pick(kUdmax[trim_row(trimming)], level);
}

double seqf_critical_value(double trimming, int l, double level) {
    int row = trim_row(trimming);
    if (l == 0) return pick(kSupF[row][0], level);
    int li = std::min(l, 4);
    return pick(kSeqF[row][li - 1], level);
}

BreakTestReport run_bai_perron(std::span<const double> values,
                               std::span<const Date> dates,
                               const BreakConfig& config) {
    if (dates.size() != values.size())
        throw ValidationError("run_bai_perron: dates/values length mismatch");
    SegmentCostTable tab(values, config.trimming);
    const int T = tab.size();
    const int L = tab.min_segment_length();
    const int M = feasible_max_breaks(config.max_breaks, config.trimming, L, T);
    if (M < 1) throw ValidationError("run_bai_perron: no feasible break count");

    BreakTestReport report;
    report.trimming = config.trimming;
    report.max_breaks = M;
    report.udmax =
        udmax_test(values, M, config.trimming, config.hac_robust, config.kernel);

    int row = trim_row(config.trimming);
    for (int l = 0; l < M; ++l) {
        double stat;
        try {
            stat = sup_f_test(values, l, config.trimming, config.hac_robust,
                              config.kernel);
        } catch (const NumericalError&) {
            break; // no room for an extra break beyond this point
        }
        StatWithStars s;
        s.value = stat;
        if (l == 0)
            s.stars = stars_for(stat, kSupF[row][0].q90, kSupF[row][0].q95,
                                kSupF[row][0].q99);
        else {
            int li = std::min(l, 4) - 1;
            s.stars = stars_for(stat, kSeqF[row][li].q90, kSeqF[row][li].q95,
                                kSeqF[row][li].q99);
        }
        report.seq_f.push_back(s);
    }

    LwzSelection sel = lwz_select(values, M, config.trimming);
    report.lwz_by_m = sel.lwz_by_m;
    report.selected_m = sel.selected_m;

    if (report.selected_m >= 1) {
        report.model = global_minimizer(values, report.selected_m, config.trimming);
        report.intervals =
            break_confidence_intervals(values, report.model, dates, config.kernel);
    } else {
        report.model = model_from_breaks(tab, values, {});
    }

    auto bounds = regime_bounds(report.model);
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
        RegimeSummary r;
        r.first_index = bounds[j];
        r.last_index = bounds[j + 1] - 1;
        r.mean = report.model.regime_means[j];
        std::vector<double> resid;
        for (int t = r.first_index; t <= r.last_index; ++t)
            resid.push_back(values[t] - r.mean);
        r.se = std::sqrt(residual_lrv(resid, config.kernel) / resid.size());
        r.start_date = dates[r.first_index];
        r.end_date = dates[r.last_index];
        report.regimes.push_back(r);
    }
    return report;
}

} // namespace breakgauge
