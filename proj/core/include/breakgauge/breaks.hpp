#pragma once

#include "breakgauge/date.hpp"
#include "breakgauge/hac.hpp"

#include <map>
#include <span>
#include <vector>

namespace breakgauge {

/// Settings for the multiple-structural-break analysis of a mean level.
struct BreakConfig {
    double trimming = 0.20;    // minimal regime length as fraction of T
    int max_breaks = 5;        // clamped to floor(1/trimming) - 1 when infeasible
    double significance = 0.05;
    bool hac_robust = true;    // HAC variances in the F statistics and intervals
    KernelSpec kernel = KernelSpec::andrews(KernelKind::parzen);
};

/// A fitted mean-shift segmentation. break_indices[i] is the 1-based count
/// of observations up to and including the last observation of regime i.
struct BreakModel {
    std::vector<int> break_indices; // ascending, m entries
    std::vector<double> regime_means; // m+1 entries
    double ssr = 0.0;
    int T = 0;
};

struct StatWithStars {
    double value = 0.0;
    int stars = 0; // 0..3 (10%/5%/1%)
};

struct BreakInterval {
    int break_index = 0; // same convention as BreakModel
    Date date;
    Date lo90, hi90, lo95, hi95;
    int lo90_index = 0, hi90_index = 0, lo95_index = 0, hi95_index = 0;
};

struct RegimeSummary {
    int first_index = 0, last_index = 0; // 0-based observation range
    double mean = 0.0, se = 0.0;         // HAC-robust standard error of the mean
    Date start_date, end_date;
};

struct BreakTestReport {
    StatWithStars udmax;
    std::vector<StatWithStars> seq_f; // F(l+1|l) for l = 0..; infeasible ls omitted
    std::map<int, double> lwz_by_m;
    int selected_m = 0;
    BreakModel model;
    std::vector<BreakInterval> intervals;
    std::vector<RegimeSummary> regimes;
    double trimming = 0.0;
    int max_breaks = 0; // feasible maximum actually tested
};

/// O(1) segment SSR lookups backed by prefix sums of values and squares.
class SegmentCostTable {
public:
    SegmentCostTable(std::span<const double> values, double trimming);
    SegmentCostTable(std::span<const double> values, int min_segment_length);

    /// SSR of fitting one mean to observations i..j (0-based, inclusive).
    double cost(int i, int j) const {
        double n = j - i + 1;
        double a = sum_[j + 1] - sum_[i];
        return (sumsq_[j + 1] - sumsq_[i]) - a * a / n;
    }
    double mean(int i, int j) const { return (sum_[j + 1] - sum_[i]) / (j - i + 1); }
    int size() const { return static_cast<int>(sum_.size()) - 1; }
    int min_segment_length() const { return min_len_; }

private:
    std::vector<double> sum_, sumsq_;
    int min_len_ = 0;
};

/// Globally SSR-minimizing placement of m breaks (dynamic programming);
/// ties broken by the lexicographically smallest break sequence.
BreakModel global_minimizer(std::span<const double> values, int m, double trimming);

/// Minimal SSR for every break count 0..max_m in one DP pass.
std::vector<double> min_ssr_by_breaks(std::span<const double> values, int max_m,
                                      double trimming);

/// sup-F statistic of l+1 breaks against l, evaluated at SSR-minimizing
/// break placements.
double sup_f_test(std::span<const double> values, int l, double trimming,
                  bool hac_robust = true,
                  const KernelSpec& kernel = KernelSpec::andrews(KernelKind::parzen));

StatWithStars udmax_test(std::span<const double> values, int max_breaks,
                         double trimming, bool hac_robust = true,
                         const KernelSpec& kernel = KernelSpec::andrews(KernelKind::parzen));

struct LwzSelection {
    std::map<int, double> lwz_by_m;
    int selected_m = 0;
};

/// Liu-Wu-Zidek criterion over m = 0..max_breaks.
LwzSelection lwz_select(std::span<const double> values, int max_breaks,
                        double trimming);

std::vector<BreakInterval> break_confidence_intervals(
    std::span<const double> values, const BreakModel& model,
    std::span<const Date> dates,
    const KernelSpec& kernel = KernelSpec::andrews(KernelKind::parzen));

/// Full test battery: UDmax, sequential sup-F, LWZ selection, the selected
/// model with regime means and HAC standard errors, and break-date intervals.
BreakTestReport run_bai_perron(std::span<const double> values,
                               std::span<const Date> dates,
                               const BreakConfig& config);

/// Null critical value of sup-F(m|0) for the mean-shift model.
double supf_critical_value(double trimming, int m, double level);
double udmax_critical_value(double trimming, double level);
double seqf_critical_value(double trimming, int l, double level);

/// Two-sided quantile of the break-date limiting distribution
/// (argmax of W(s) - |s|/2); coverage in (0,1).
double break_date_quantile(double coverage);

} // namespace breakgauge
