// breakgauge: structural-break and fear-gauge analysis of a volatility index.
//
//   breakgauge run <config.json> [flags]     full pipeline
//   breakgauge breaks <csv> [flags]          Bai-Perron test on one series
//   breakgauge estimate <vix.csv> <mkt.csv>  fear-model regression
//
// exit codes: 0 success, 1 validation failure, 2 numerical failure

#include <breakgauge/breaks.hpp>
#include <breakgauge/descstats.hpp>
#include <breakgauge/errors.hpp>
#include <breakgauge/fearmodel.hpp>
#include <breakgauge/pipeline.hpp>
#include <breakgauge/series.hpp>
#include <breakgauge/table.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

using namespace breakgauge;

struct CommonFlags {
    std::string date_column = "date";
    std::string value_column = "close";
    std::string date_format = "%Y-%m-%d";
    double trimming = 0.20;
    int max_breaks = 5;
    std::string kernel = "parzen";
    std::optional<double> bandwidth;
    double cvix_scale = 100.0;
};

KernelSpec make_kernel(const CommonFlags& f) {
    KernelKind kind = kernel_kind_from_string(f.kernel);
    return f.bandwidth ? KernelSpec::fixed(kind, *f.bandwidth)
                       : KernelSpec::andrews(kind);
}

void print_break_report(const BreakTestReport& r) {
    std::printf("observations: %d  trimming: %.2f  max breaks tested: %d\n",
                r.model.T, r.trimming, r.max_breaks);
    std::printf("UDmax: %.4f%s\n", r.udmax.value, stars_text(r.udmax.stars).c_str());
    for (std::size_t l = 0; l < r.seq_f.size(); ++l)
        std::printf("F(%zu|%zu): %.4f%s\n", l + 1, l, r.seq_f[l].value,
                    stars_text(r.seq_f[l].stars).c_str());
    for (const auto& [m, lwz] : r.lwz_by_m)
        std::printf("LWZ(m=%d): %s\n", m,
                    std::isfinite(lwz) ? format_real(lwz).c_str() : "-inf");
    std::printf("selected breaks: %d\n", r.selected_m);
    for (std::size_t i = 0; i < r.regimes.size(); ++i) {
        const auto& reg = r.regimes[i];
        std::printf("regime %zu: %s .. %s  mean %.4f (se %.4f), %d obs\n", i + 1,
                    reg.start_date.iso().c_str(), reg.end_date.iso().c_str(), reg.mean,
                    reg.se, reg.last_index - reg.first_index + 1);
    }
    for (std::size_t i = 0; i < r.intervals.size(); ++i) {
        const auto& bi = r.intervals[i];
        std::printf("break %zu: %s  90%% [%s; %s]  95%% [%s; %s]\n", i + 1,
                    bi.date.iso().c_str(), bi.lo90.iso().c_str(), bi.hi90.iso().c_str(),
                    bi.lo95.iso().c_str(), bi.hi95.iso().c_str());
    }
}

int cmd_run(const std::string& config_path, const CLI::App& sub,
            PipelineConfig (*loader)(const std::string&)) {
    PipelineConfig cfg = loader(config_path);
    // flag overrides
    for (const auto* opt : sub.get_options()) {
        if (opt->empty()) continue;
        const std::string& name = opt->get_name();
        if (name == "--input") cfg.vix_file = opt->as<std::string>();
        else if (name == "--window-start") cfg.window_start = Date::parse(opt->as<std::string>());
        else if (name == "--window-end") cfg.window_end = Date::parse(opt->as<std::string>());
        else if (name == "--trimming") cfg.break_config.trimming = opt->as<double>();
        else if (name == "--max-breaks") cfg.break_config.max_breaks = opt->as<int>();
        else if (name == "--cvix-scale") cfg.cvix_scale = opt->as<double>();
        else if (name == "--kernel") {
            cfg.kernel.kind = kernel_kind_from_string(opt->as<std::string>());
            cfg.break_config.kernel = cfg.kernel;
        } else if (name == "--output-dir") cfg.output_dir = opt->as<std::string>();
        else if (name == "--standardized-breaks") cfg.standardized_breaks = true;
    }
    PipelineReport report = run_pipeline(cfg);
    std::printf("pipeline complete: %zu observations, %d breaks selected\n",
                report.observations, report.selected_breaks);
    for (const auto& [name, files] : report.files)
        for (const auto& f : files) std::printf("  wrote %s\n", f.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structural breaks and fear-gauge estimation for volatility indexes"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string config_path, series_path, vix_path, market_path;
    std::string window_start, window_end, output_dir;
    bool standardized = false;

    auto* run = app.add_subcommand("run", "run the full configured pipeline");
    run->add_option("config", config_path, "pipeline config (JSON)")->required();
    run->add_option("--input")->description("override the VIX input file");
    run->add_option("--window-start")->description("override window start (YYYY-MM-DD)");
    run->add_option("--window-end")->description("override window end (YYYY-MM-DD)");
    run->add_option("--trimming")->description("override break trimming fraction");
    run->add_option("--max-breaks")->description("override maximum break count");
    run->add_option("--cvix-scale")->description("override the cVIX divisor");
    run->add_option("--kernel")->description("override the HAC kernel (parzen|bartlett)");
    run->add_option("--output-dir")->description("override the output directory");
    run->add_flag("--standardized-breaks")
        ->description("detect breaks on the standardized series");

    auto* brk = app.add_subcommand("breaks", "Bai-Perron break test on one CSV series");
    brk->add_option("csv", series_path, "input CSV")->required();
    brk->add_option("--date-column", flags.date_column);
    brk->add_option("--value-column", flags.value_column);
    brk->add_option("--date-format", flags.date_format);
    brk->add_option("--trimming", flags.trimming);
    brk->add_option("--max-breaks", flags.max_breaks);
    brk->add_option("--kernel", flags.kernel);
    brk->add_flag("--standardized", standardized,
                  "standardize with outlier exclusion first");

    auto* est = app.add_subcommand("estimate", "fear-model regression of cVIX on returns");
    est->add_option("vix", vix_path, "VIX closes CSV")->required();
    est->add_option("market", market_path, "market index closes CSV")->required();
    est->add_option("--date-column", flags.date_column);
    est->add_option("--value-column", flags.value_column);
    est->add_option("--date-format", flags.date_format);
    est->add_option("--kernel", flags.kernel);
    est->add_option("--cvix-scale", flags.cvix_scale);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, *run, &PipelineConfig::from_json_file);

        if (brk->parsed()) {
            ObservationSeries s = load_series(series_path, flags.date_column,
                                              flags.value_column, flags.date_format);
            BreakConfig cfg;
            cfg.trimming = flags.trimming;
            cfg.max_breaks = flags.max_breaks;
            cfg.kernel = make_kernel(flags);
            if (standardized) {
                auto std_series = standardize_excluding_outliers(s.values);
                std::vector<breakgauge::Date> dates;
                std::size_t ei = 0;
                for (std::size_t i = 0; i < s.dates.size(); ++i) {
                    if (ei < std_series.excluded.size() && std_series.excluded[ei] == i) {
                        ++ei;
                        continue;
                    }
                    dates.push_back(s.dates[i]);
                }
                print_break_report(
                    run_bai_perron(std_series.standardized, dates, cfg));
            } else {
                print_break_report(run_bai_perron(s.values, s.dates, cfg));
            }
            return 0;
        }

        // estimate
        ObservationSeries vix = load_series(vix_path, flags.date_column,
                                            flags.value_column, flags.date_format, "VIX");
        ObservationSeries mkt = load_series(market_path, flags.date_column,
                                            flags.value_column, flags.date_format,
                                            "market");
        AlignedPanel panel = align_panel(vix, {mkt});
        std::vector<breakgauge::Date> ret_dates(panel.calendar.begin() + 1,
                                                panel.calendar.end());
        ReturnSeries cvix =
            compute_returns(panel.columns.at("VIX").values,
                            ReturnKind::scaled_difference, flags.cvix_scale, "cVIX");
        ReturnSeries ret = compute_returns(panel.columns.at("market").values,
                                           ReturnKind::log_return, 1.0, "market");
        FearModelDesign design =
            build_design(cvix.values, ret.values, ret_dates, "market",
                         panel.calendar.front(), panel.calendar.back());
        FearModelEstimate e = estimate(design, make_kernel(flags));
        static const char* names[] = {"alpha", "beta_t-2", "beta_t-1", "beta_t",
                                      "beta_t+1", "beta_t+2", "beta_abs"};
        std::printf("n = %zu, bandwidth = %.4f\n", e.n, e.bandwidth_used);
        for (int j = 0; j < 7; ++j)
            std::printf("%-9s % .4f  (t = % .4f)\n", names[j], e.coef(j), e.tstat(j));
        AsymmetrySummary a = asymmetry_summary(e);
        std::printf("|beta+| = %.4f  |beta-| = %.4f  dominant: %s\n", a.abs_beta_plus,
                    a.abs_beta_minus,
                    a.dominant_side < 0 ? "negative" : a.dominant_side > 0 ? "positive"
                                                                          : "none");
        return 0;
    } catch (const breakgauge::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const breakgauge::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
