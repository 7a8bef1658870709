#include "breakgauge/pipeline.hpp"

#include "breakgauge/descstats.hpp"
#include "breakgauge/errors.hpp"
#include "breakgauge/fearmodel.hpp"
#include "breakgauge/table.hpp"
#include "breakgauge/unitroot.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

namespace breakgauge {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Scope {
    std::string label;
    Date start, end;
};

// indices of dates within [start, end]
std::pair<std::size_t, std::size_t> date_range(const std::vector<Date>& dates,
                                               Date start, Date end) {
    std::size_t lo = 0, hi = dates.size();
    while (lo < hi && dates[lo] < start) ++lo;
    while (hi > lo && end < dates[hi - 1]) --hi;
    return {lo, hi};
}

void run_tasks(std::size_t count, unsigned threads,
               const std::function<void(std::size_t)>& task) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (unsigned w = 0; w < std::min<std::size_t>(threads, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace

unsigned max_threads() {
    if (const char* env = std::getenv("BREAKGAUGE_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }

    PipelineConfig c;
    try {
        c.vix_file = j.at("vix_file").get<std::string>();
        if (j.contains("market_files"))
            for (auto& [id, p] : j["market_files"].items())
                c.market_files[id] = p.get<std::string>();
        c.date_column = j.value("date_column", c.date_column);
        c.value_column = j.value("value_column", c.value_column);
        c.date_format = j.value("date_format", c.date_format);
        const auto& w = j.at("window");
        c.window_start = Date::parse(w.at("start").get<std::string>());
        c.window_end = Date::parse(w.at("end").get<std::string>());
        if (j.contains("return_kind"))
            c.return_kind = return_kind_from_string(j["return_kind"].get<std::string>());
        c.cvix_scale = j.value("cvix_scale", c.cvix_scale);
        if (j.contains("breaks")) {
            const auto& b = j["breaks"];
            c.break_config.trimming = b.value("trimming", c.break_config.trimming);
            c.break_config.max_breaks = b.value("max_breaks", c.break_config.max_breaks);
            c.break_config.significance =
                b.value("significance", c.break_config.significance);
            c.break_config.hac_robust = b.value("hac_robust", c.break_config.hac_robust);
        }
        if (j.contains("kernel")) {
            const auto& k = j["kernel"];
            KernelKind kind = kernel_kind_from_string(k.value("kind", "parzen"));
            if (k.contains("bandwidth") && k["bandwidth"].is_number())
                c.kernel = KernelSpec::fixed(kind, k["bandwidth"].get<double>());
            else
                c.kernel = KernelSpec::andrews(kind);
        }
        c.break_config.kernel = c.kernel;
        if (j.contains("regimes") && !j["regimes"].is_string()) {
            c.auto_regimes = false;
            int i = 0;
            for (const auto& r : j["regimes"]) {
                RegimeWindow rw;
                rw.label = r.value("label", "regime_" + std::to_string(++i));
                rw.start = Date::parse(r.at("start").get<std::string>());
                rw.end = Date::parse(r.at("end").get<std::string>());
                c.explicit_regimes.push_back(rw);
            }
        }
        c.standardized_breaks = j.value("standardized_breaks", false);
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("output_formats")) {
            c.output_formats.clear();
            for (const auto& f : j["output_formats"])
                c.output_formats.insert(f.get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config schema error: ") + e.what());
    }
    return c;
}

void PipelineConfig::validate() const {
    if (vix_file.empty()) throw ValidationError("config: vix_file is required");
    if (!(window_start < window_end))
        throw ValidationError("config: window start must precede end");
    if (cvix_scale <= 0.0) throw ValidationError("config: cvix_scale must be positive");
    if (break_config.trimming <= 0.0 || break_config.trimming >= 0.5)
        throw ValidationError("config: trimming must be in (0, 0.5)");
    if (break_config.max_breaks < 1)
        throw ValidationError("config: max_breaks must be >= 1");
    for (const auto& f : output_formats)
        if (f != "csv" && f != "markdown")
            throw ValidationError("config: unknown output format " + f);
    if (output_formats.empty())
        throw ValidationError("config: at least one output format required");
    if (!auto_regimes) {
        if (explicit_regimes.empty())
            throw ValidationError("config: explicit regimes list is empty");
        for (std::size_t i = 0; i < explicit_regimes.size(); ++i) {
            const auto& r = explicit_regimes[i];
            if (!(r.start < r.end) || (i > 0 && r.start < explicit_regimes[i - 1].end))
                throw ValidationError("config: regimes must be ordered and disjoint");
        }
    }
}

PipelineReport run_pipeline(const PipelineConfig& config) {
    config.validate();

    std::vector<std::string> written;
    auto cleanup = [&] {
        for (const auto& f : written) {
            std::error_code ec;
            fs::remove(f, ec);
        }
    };

    try {
        // --- ingest ---------------------------------------------------
        ObservationSeries vix = load_series(config.vix_file, config.date_column,
                                            config.value_column, config.date_format,
                                            "VIX");
        auto [vlo, vhi] = date_range(vix.dates, config.window_start, config.window_end);
        if (vhi - vlo < 50)
            throw ValidationError("pipeline: fewer than 50 VIX observations in window");
        ObservationSeries vix_w;
        vix_w.instrument_id = "VIX";
        vix_w.dates.assign(vix.dates.begin() + vlo, vix.dates.begin() + vhi);
        vix_w.values.assign(vix.values.begin() + vlo, vix.values.begin() + vhi);
        vix_w.validate(true);

        std::vector<ObservationSeries> markets;
        std::vector<std::string> market_ids;
        for (const auto& [id, path] : config.market_files) {
            markets.push_back(load_series(path, config.date_column, config.value_column,
                                          config.date_format, id));
            market_ids.push_back(id);
        }
        AlignedPanel panel = align_panel(vix_w, markets);

        const std::vector<Date>& cal = panel.calendar;
        std::vector<Date> ret_dates(cal.begin() + 1, cal.end());
        const std::vector<double>& vix_levels = panel.columns.at("VIX").values;
        ReturnSeries cvix = compute_returns(vix_levels, ReturnKind::scaled_difference,
                                            config.cvix_scale, "cVIX");
        std::map<std::string, ReturnSeries> returns;
        for (const auto& id : market_ids)
            returns[id] = compute_returns(panel.columns.at(id).values,
                                          config.return_kind, 1.0, id);

        // --- structural breaks ---------------------------------------
        BreakTestReport breaks_report;
        if (config.standardized_breaks) {
            auto std_series = standardize_excluding_outliers(vix_levels);
            std::vector<Date> std_dates;
            std::size_t ei = 0;
            for (std::size_t i = 0; i < cal.size(); ++i) {
                if (ei < std_series.excluded.size() && std_series.excluded[ei] == i) {
                    ++ei;
                    continue;
                }
                std_dates.push_back(cal[i]);
            }
            breaks_report = run_bai_perron(std_series.standardized, std_dates,
                                           config.break_config);
        } else {
            breaks_report = run_bai_perron(vix_levels, cal, config.break_config);
        }

        // --- regime windows ------------------------------------------
        std::vector<Scope> scopes;
        scopes.push_back({"full", cal.front(), cal.back()});
        std::vector<RegimeWindow> regime_windows;
        if (config.auto_regimes) {
            for (std::size_t i = 0; i < breaks_report.regimes.size(); ++i) {
                RegimeWindow rw;
                rw.label = "regime_" + std::to_string(i + 1);
                rw.start = breaks_report.regimes[i].start_date;
                rw.end = breaks_report.regimes[i].end_date;
                regime_windows.push_back(rw);
            }
        } else {
            regime_windows = config.explicit_regimes;
        }
        for (const auto& rw : regime_windows)
            scopes.push_back({rw.label, rw.start, rw.end});

        // returns/cvix index range for a scope: return t carries date cal[t+1]
        auto return_slice = [&](const Scope& s) {
            auto [lo, hi] = date_range(ret_dates, s.start, s.end);
            return std::pair<std::size_t, std::size_t>(lo, hi);
        };
        auto level_slice = [&](const Scope& s) { return date_range(cal, s.start, s.end); };

        // --- table 1: breaks -----------------------------------------
        Table t1;
        t1.title = "Structural break tests";
        t1.header = {"statistic", "value", "stars"};
        t1.add_row({"observations", std::to_string(cal.size()), ""});
        t1.add_row({"trimming", format_real(breaks_report.trimming), ""});
        t1.add_row({"max_breaks", std::to_string(breaks_report.max_breaks), ""});
        t1.add_row({"udmax", format_real(breaks_report.udmax.value),
                    stars_text(breaks_report.udmax.stars)});
        for (std::size_t l = 0; l < breaks_report.seq_f.size(); ++l)
            t1.add_row({"F(" + std::to_string(l + 1) + "|" + std::to_string(l) + ")",
                        format_real(breaks_report.seq_f[l].value),
                        stars_text(breaks_report.seq_f[l].stars)});
        for (const auto& [m, lwz] : breaks_report.lwz_by_m)
            t1.add_row({"lwz_m" + std::to_string(m),
                        std::isfinite(lwz) ? format_real(lwz) : "-inf", ""});
        t1.add_row({"selected_breaks", std::to_string(breaks_report.selected_m), ""});
        for (std::size_t i = 0; i < breaks_report.regimes.size(); ++i) {
            const auto& r = breaks_report.regimes[i];
            std::string tag = "regime_" + std::to_string(i + 1);
            t1.add_row({tag + "_start", r.start_date.iso(), ""});
            t1.add_row({tag + "_end", r.end_date.iso(), ""});
            t1.add_row({tag + "_mean", format_real(r.mean), ""});
            t1.add_row({tag + "_se", format_real(r.se), ""});
            t1.add_row({tag + "_obs", std::to_string(r.last_index - r.first_index + 1), ""});
        }
        for (std::size_t i = 0; i < breaks_report.intervals.size(); ++i) {
            const auto& bi = breaks_report.intervals[i];
            std::string tag = "break_" + std::to_string(i + 1);
            t1.add_row({tag + "_date", bi.date.iso(), ""});
            t1.add_row({tag + "_ci90", bi.lo90.iso() + ".." + bi.hi90.iso(), ""});
            t1.add_row({tag + "_ci95", bi.lo95.iso() + ".." + bi.hi95.iso(), ""});
        }

        // --- table 2: percentiles ------------------------------------
        Table t2;
        t2.title = "VIX percentile profile";
        t2.header = {"scope", "n", "p5", "p10", "p25", "p50", "p75", "p90", "p95",
                     "normal50", "normal90"};
        for (const auto& s : scopes) {
            auto [lo, hi] = level_slice(s);
            std::span<const double> vals(vix_levels.data() + lo, hi - lo);
            PercentileProfile prof = percentile_profile(vals);
            t2.add_row({s.label, std::to_string(prof.n), format_real(prof.p.at(5)),
                        format_real(prof.p.at(10)), format_real(prof.p.at(25)),
                        format_real(prof.p.at(50)), format_real(prof.p.at(75)),
                        format_real(prof.p.at(90)), format_real(prof.p.at(95)),
                        format_real(prof.normal50), format_real(prof.normal90)});
        }

        // --- table 3: descriptives -----------------------------------
        Table t3;
        t3.title = "Descriptive statistics";
        t3.header = {"scope",  "series", "n",      "mean", "stddev", "min",
                     "max",    "rho1",   "rho2",   "rho3", "adf",    "adf_stars"};
        auto add_desc = [&](const std::string& scope, const std::string& name,
                            std::span<const double> vals) {
            SummaryStats st = summary(vals);
            AdfResult adf = adf_test(vals, AdfVariant::constant, LagRule::fixed(1));
            t3.add_row({scope, name, std::to_string(st.n), format_real(st.mean),
                        format_real(st.stddev), format_real(st.min), format_real(st.max),
                        format_real(st.rho[0]), format_real(st.rho[1]),
                        format_real(st.rho[2]), format_real(adf.statistic),
                        stars_text(adf.stars())});
        };
        for (const auto& s : scopes) {
            auto [llo, lhi] = level_slice(s);
            add_desc(s.label, "VIX",
                     std::span<const double>(vix_levels.data() + llo, lhi - llo));
            auto [rlo, rhi] = return_slice(s);
            add_desc(s.label, "cVIX",
                     std::span<const double>(cvix.values.data() + rlo, rhi - rlo));
            for (const auto& id : market_ids)
                add_desc(s.label, id,
                         std::span<const double>(returns.at(id).values.data() + rlo,
                                                 rhi - rlo));
        }

        // --- table 5: lead/lag correlations --------------------------
        Table t5;
        t5.title = "Lead-lag correlations with cVIX";
        t5.header = {"market", "offset"};
        for (const auto& s : scopes) {
            t5.header.push_back(s.label);
            t5.header.push_back(s.label + "_stars");
        }
        {
            std::map<std::string, std::vector<LeadLagCorrelation>> by_market;
            for (const auto& id : market_ids) {
                for (const auto& s : scopes) {
                    auto [lo, hi] = return_slice(s);
                    std::span<const double> cv(cvix.values.data() + lo, hi - lo);
                    std::span<const double> rr(returns.at(id).values.data() + lo, hi - lo);
                    by_market[id].push_back(leadlag_correlations(cv, rr, id));
                }
            }
            for (const auto& id : market_ids) {
                for (std::size_t k = 0; k < 5; ++k) {
                    std::vector<std::string> row{id,
                                                 std::to_string(by_market[id][0].offsets[k])};
                    for (std::size_t si = 0; si < scopes.size(); ++si) {
                        row.push_back(format_real(by_market[id][si].r[k]));
                        row.push_back(stars_text(by_market[id][si].stars[k]));
                    }
                    t5.add_row(row);
                }
            }
        }

        // --- table 6: fear-model estimates ---------------------------
        Table t6;
        t6.title = "Fear-model estimates";
        t6.header = {"market",  "scope",   "n",       "alpha",  "t_alpha", "b_m2",
                     "t_b_m2",  "b_m1",    "t_b_m1",  "b_0",    "t_b_0",   "b_p1",
                     "t_b_p1",  "b_p2",    "t_b_p2",  "b_abs",  "t_b_abs", "beta_plus",
                     "beta_minus", "dominant"};
        {
            struct Task {
                std::string market;
                std::size_t scope_index;
            };
            std::vector<Task> tasks;
            for (const auto& id : market_ids)
                for (std::size_t si = 0; si < scopes.size(); ++si)
                    tasks.push_back({id, si});
            std::vector<FearModelEstimate> results(tasks.size());
            run_tasks(tasks.size(), max_threads(), [&](std::size_t i) {
                const auto& task = tasks[i];
                const auto& s = scopes[task.scope_index];
                FearModelDesign d =
                    build_design(cvix.values, returns.at(task.market).values, ret_dates,
                                 task.market, s.start, s.end);
                results[i] = estimate(d, config.kernel);
            });
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                const auto& est = results[i];
                AsymmetrySummary asym = asymmetry_summary(est);
                std::vector<std::string> row{tasks[i].market,
                                             scopes[tasks[i].scope_index].label,
                                             std::to_string(est.n)};
                for (Eigen::Index j = 0; j < est.coef.size(); ++j) {
                    row.push_back(format_real(est.coef(j)));
                    row.push_back(format_real(est.tstat(j)));
                }
                row.push_back(format_real(asym.abs_beta_plus));
                row.push_back(format_real(asym.abs_beta_minus));
                row.push_back(asym.dominant_side < 0   ? "negative"
                              : asym.dominant_side > 0 ? "positive"
                                                       : "none");
                t6.add_row(row);
            }
        }

        // --- figure 1 export -----------------------------------------
        Table fig1;
        fig1.title = "VIX levels with regime bands";
        fig1.header = {"date", "vix", "regime_id"};
        for (std::size_t i = 0; i < cal.size(); ++i) {
            std::size_t rid = 0;
            for (std::size_t r = 0; r < regime_windows.size(); ++r)
                if (!(cal[i] < regime_windows[r].start) &&
                    !(regime_windows[r].end < cal[i]))
                    rid = r + 1;
            fig1.add_row({cal[i].iso(), format_real(vix_levels[i]),
                          std::to_string(rid)});
        }

        // --- emission ------------------------------------------------
        fs::create_directories(config.output_dir);
        PipelineReport report;
        report.observations = cal.size();
        report.selected_breaks = breaks_report.selected_m;
        report.regimes = regime_windows;

        auto emit = [&](const std::string& name, const Table& t) {
            for (const auto& fmt : config.output_formats) {
                std::string ext = fmt == "csv" ? ".csv" : ".md";
                std::string path = (fs::path(config.output_dir) / (name + ext)).string();
                emit_table(t, fmt, path);
                written.push_back(path);
                report.files[name].push_back(path);
            }
        };
        emit("table1_breaks", t1);
        emit("table2_percentiles", t2);
        emit("table3_descriptives", t3);
        emit("table5_correlations", t5);
        emit("table6_estimates", t6);
        emit("fig1_regimes", fig1);
        return report;
    } catch (...) {
        cleanup();
        throw;
    }
}

} // namespace breakgauge
