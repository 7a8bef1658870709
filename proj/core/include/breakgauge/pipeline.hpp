#pragma once

#include "breakgauge/breaks.hpp"
#include "breakgauge/date.hpp"
#include "breakgauge/hac.hpp"
#include "breakgauge/series.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace breakgauge {

struct RegimeWindow {
    std::string label;
    Date start, end;
};

/// Declarative description of one full analysis run.
struct PipelineConfig {
    std::string vix_file;
    std::map<std::string, std::string> market_files; // id -> path
    std::string date_column = "date";
    std::string value_column = "close";
    std::string date_format = "%Y-%m-%d";
    Date window_start, window_end;
    ReturnKind return_kind = ReturnKind::log_return;
    double cvix_scale = 100.0;
    BreakConfig break_config;
    KernelSpec kernel = KernelSpec::andrews(KernelKind::parzen);
    bool auto_regimes = true;
    std::vector<RegimeWindow> explicit_regimes; // used when !auto_regimes
    bool standardized_breaks = false;
    std::string output_dir = ".";
    std::set<std::string> output_formats{"csv", "markdown"};

    static PipelineConfig from_json_file(const std::string& path);
    void validate() const;
};

struct PipelineReport {
    // table name -> emitted files
    std::map<std::string, std::vector<std::string>> files;
    std::size_t observations = 0;
    int selected_breaks = 0;
    std::vector<RegimeWindow> regimes;
};

/// ingest -> descriptive stats -> ADF -> Bai-Perron -> per-regime fear-model
/// estimation -> table emission. Partial outputs are removed on failure.
PipelineReport run_pipeline(const PipelineConfig& config);

/// Parallelism cap: BREAKGAUGE_THREADS, hardware concurrency otherwise.
unsigned max_threads();

} // namespace breakgauge
