#include <breakgauge/errors.hpp>
#include <breakgauge/pipeline.hpp>
#include <breakgauge/table.hpp>

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

using namespace breakgauge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// small synthetic market: one break in the VIX mean, two markets
struct SmallFixture {
    fs::path dir;
    PipelineConfig config;
};

SmallFixture make_small_fixture(const std::string& tag) {
    SmallFixture fx;
    fx.dir = fs::temp_directory_path() / ("bg_pipe_" + tag);
    fs::create_directories(fx.dir);

    const int T = 700;
    std::mt19937 rng(555);
    std::normal_distribution<double> z(0.0, 1.5);
    std::normal_distribution<double> eta(0.0, 0.004);

    std::vector<Date> cal;
    Date d = Date::from_ymd(2015, 1, 1);
    while (static_cast<int>(cal.size()) < T) {
        cal.push_back(d);
        d = d + 1;
    }
    std::vector<double> vix(T);
    for (int t = 0; t < T; ++t) vix[t] = (t < 350 ? 18.0 : 28.0) + z(rng);

    auto write = [&](const std::string& name, const std::vector<double>& vals) {
        std::ofstream out(fx.dir / name);
        out << "date,close\n";
        for (int t = 0; t < T; ++t) out << cal[t].iso() << "," << vals[t] << "\n";
    };
    write("vix.csv", vix);

    for (auto [id, loading] : {std::pair{"aaa", -0.8}, {"bbb", -0.3}}) {
        std::vector<double> levels(T);
        levels[0] = 100.0;
        for (int t = 1; t < T; ++t) {
            double cvix = (vix[t] - vix[t - 1]) / 100.0;
            levels[t] = levels[t - 1] * std::exp(loading * cvix + eta(rng));
        }
        write(std::string(id) + ".csv", levels);
    }

    fx.config.vix_file = (fx.dir / "vix.csv").string();
    fx.config.market_files["AAA"] = (fx.dir / "aaa.csv").string();
    fx.config.market_files["BBB"] = (fx.dir / "bbb.csv").string();
    fx.config.window_start = cal.front();
    fx.config.window_end = cal.back();
    fx.config.break_config.trimming = 0.2;
    fx.config.break_config.max_breaks = 3;
    fx.config.output_dir = (fx.dir / "out").string();
    return fx;
}

} // namespace

TEST_CASE("emit_table writes csv and markdown with quoting") {
    Table t;
    t.title = "demo";
    t.header = {"a", "b"};
    t.add_row({"plain", "with,comma"});
    t.add_row({"quote\"inside", "x"});
    auto base = fs::temp_directory_path() / "bg_table";
    emit_table(t, "csv", (base.string() + ".csv"));
    emit_table(t, "markdown", (base.string() + ".md"));

    auto csv = slurp(base.string() + ".csv");
    CHECK(csv.find("a,b\n") != std::string::npos);
    CHECK(csv.find("\"with,comma\"") != std::string::npos);
    CHECK(csv.find("\"quote\"\"inside\"") != std::string::npos);
    auto md = slurp(base.string() + ".md");
    CHECK(md.find("| a | b |") != std::string::npos);
    CHECK(md.find("| --- | --- |") != std::string::npos);
    CHECK_THROWS_AS(emit_table(t, "xml", base.string() + ".xml"), ValidationError);
}

TEST_CASE("format_real fixed four decimals") {
    CHECK(format_real(-1.24064) == "-1.2406");
    CHECK(format_real(0.0) == "0.0000");
    CHECK(format_real(std::nan("")) == "-");
    CHECK(stars_text(3) == "***");
    CHECK(stars_text(0) == "");
}

TEST_CASE("config json round trip and validation") {
    auto dir = fs::temp_directory_path();
    auto path = (dir / "bg_cfg.json").string();
    {
        std::ofstream out(path);
        out << R"({
          "vix_file": "v.csv",
          "market_files": {"SPX": "s.csv"},
          "window": {"start": "2007-01-03", "end": "2018-02-01"},
          "return_kind": "log",
          "cvix_scale": 100,
          "breaks": {"trimming": 0.2, "max_breaks": 5},
          "kernel": {"kind": "bartlett", "bandwidth": 4},
          "output_dir": "out",
          "output_formats": ["csv"]
        })";
    }
    auto cfg = PipelineConfig::from_json_file(path);
    CHECK(cfg.vix_file == "v.csv");
    CHECK(cfg.market_files.at("SPX") == "s.csv");
    CHECK(cfg.window_start.iso() == "2007-01-03");
    CHECK(cfg.kernel.kind == KernelKind::bartlett);
    CHECK(!cfg.kernel.automatic);
    CHECK(cfg.kernel.bandwidth == 4.0);
    CHECK(cfg.output_formats == std::set<std::string>{"csv"});
    cfg.validate();

    auto bad = cfg;
    bad.window_end = bad.window_start;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.break_config.trimming = 0.6;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.output_formats = {"pdf"};
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    CHECK_THROWS_AS(PipelineConfig::from_json_file("/nonexistent.json"),
                    ValidationError);
}

TEST_CASE("window end before start writes nothing") {
    auto fx = make_small_fixture("invalid");
    fx.config.window_end = fx.config.window_start;
    CHECK_THROWS_AS(run_pipeline(fx.config), ValidationError);
    CHECK(!fs::exists(fs::path(fx.config.output_dir) / "table1_breaks.csv"));
}

TEST_CASE("end-to-end on a one-break synthetic") {
    auto fx = make_small_fixture("e2e");
    auto report = run_pipeline(fx.config);

    CHECK(report.observations == 700);
    CHECK(report.selected_breaks == 1);
    REQUIRE(report.regimes.size() == 2);

    const char* names[] = {"table1_breaks",     "table2_percentiles",
                           "table3_descriptives", "table5_correlations",
                           "table6_estimates",  "fig1_regimes"};
    for (const char* n : names) {
        REQUIRE(report.files.count(n) == 1);
        for (const auto& f : report.files.at(n)) {
            CHECK(fs::exists(f));
            CHECK(fs::file_size(f) > 0);
        }
        CHECK(report.files.at(n).size() == 2); // csv + markdown
    }

    // regime partition covers the calendar: fig1 rows all carry a regime id
    auto fig = slurp((fs::path(fx.config.output_dir) / "fig1_regimes.csv").string());
    CHECK(fig.find(",0\n") == std::string::npos);

    // the break lands near observation 350 (2015-12-16 +/- a few days)
    auto t1 = slurp((fs::path(fx.config.output_dir) / "table1_breaks.csv").string());
    CHECK(t1.find("selected_breaks,1,") != std::string::npos);
    CHECK(t1.find("udmax") != std::string::npos);

    // estimates present for both markets in full and both regimes
    auto t6 = slurp((fs::path(fx.config.output_dir) / "table6_estimates.csv").string());
    CHECK(t6.find("AAA,full") != std::string::npos);
    CHECK(t6.find("AAA,regime_1") != std::string::npos);
    CHECK(t6.find("BBB,regime_2") != std::string::npos);
}

TEST_CASE("pipeline output is byte-identical across runs") {
    auto fx = make_small_fixture("determinism");
    run_pipeline(fx.config);
    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(fx.config.output_dir))
        first[e.path().filename().string()] = slurp(e.path().string());
    run_pipeline(fx.config);
    for (const auto& e : fs::directory_iterator(fx.config.output_dir))
        CHECK(first.at(e.path().filename().string()) == slurp(e.path().string()));
    CHECK(first.size() == 12);
}

TEST_CASE("explicit regimes are honored") {
    auto fx = make_small_fixture("explicit");
    fx.config.auto_regimes = false;
    RegimeWindow r1{"early", fx.config.window_start, fx.config.window_start + 349};
    RegimeWindow r2{"late", fx.config.window_start + 350, fx.config.window_end};
    fx.config.explicit_regimes = {r1, r2};
    auto report = run_pipeline(fx.config);
    REQUIRE(report.regimes.size() == 2);
    CHECK(report.regimes[0].label == "early");
    auto t6 = slurp((fs::path(fx.config.output_dir) / "table6_estimates.csv").string());
    CHECK(t6.find("AAA,early") != std::string::npos);
    CHECK(t6.find("AAA,late") != std::string::npos);
}

TEST_CASE("missing market file surfaces a validation error and cleans up") {
    auto fx = make_small_fixture("missing");
    fx.config.market_files["CCC"] = (fx.dir / "does_not_exist.csv").string();
    CHECK_THROWS_AS(run_pipeline(fx.config), ValidationError);
    CHECK(!fs::exists(fs::path(fx.config.output_dir) / "table1_breaks.csv"));
}

TEST_CASE("max_threads respects the environment cap") {
    CHECK(max_threads() >= 1);
}

TEST_CASE("committed fixture: planted breaks and loadings are recovered") {
    fs::path fixtures = BREAKGAUGE_FIXTURES_DIR;
    REQUIRE(fs::exists(fixtures / "synth_vix.csv"));

    PipelineConfig cfg;
    cfg.vix_file = (fixtures / "synth_vix.csv").string();
    cfg.market_files["SPX"] = (fixtures / "synth_spx.csv").string();
    cfg.market_files["IBOV"] = (fixtures / "synth_ibov.csv").string();
    cfg.window_start = Date::parse("2007-01-03");
    cfg.window_end = Date::parse("2017-12-31");
    cfg.break_config.trimming = 0.15;
    cfg.break_config.max_breaks = 5;
    cfg.output_dir = (fs::temp_directory_path() / "bg_fixture_out").string();
    auto report = run_pipeline(cfg);

    // four mean shifts planted at observations 600/1150/1750/2250
    CHECK(report.observations == 2800);
    REQUIRE(report.selected_breaks == 4);
    const char* expect_ends[] = {"2009-04", "2011-05", "2013-09", "2015-08"};
    for (int b = 0; b < 4; ++b)
        CHECK(report.regimes[b].end.iso().substr(0, 7) == expect_ends[b]);

    // the SPX generator loads returns on cVIX with slope -0.8 and noise sd
    // 0.004, so the reverse regression slope is about -1.2
    auto t6 = slurp((fs::path(cfg.output_dir) / "table6_estimates.csv").string());
    std::istringstream lines(t6);
    std::string line;
    double b0 = 0;
    while (std::getline(lines, line))
        if (line.rfind("SPX,full,", 0) == 0) {
            std::istringstream cells(line);
            std::string cell;
            for (int c = 0; c <= 9; ++c) std::getline(cells, cell, ',');
            b0 = std::stod(cell);
        }
    CHECK(b0 < -0.9);
    CHECK(b0 > -1.5);
}
