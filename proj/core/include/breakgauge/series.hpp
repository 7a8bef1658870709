#pragma once

#include "breakgauge/date.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace breakgauge {

/// Dated daily closing levels of one instrument.
struct ObservationSeries {
    std::string instrument_id;
    std::vector<Date> dates;  // strictly increasing
    std::vector<double> values;

    /// Checks the type invariants; set require_positive for volatility
    /// indexes whose levels must be strictly positive.
    void validate(bool require_positive = false) const;
};

struct AlignedColumn {
    std::vector<double> values;
    std::vector<char> interpolated; // 1 iff the value was filled in
};

/// All instruments aligned onto the reference (VIX) trading calendar.
struct AlignedPanel {
    std::vector<Date> calendar;
    std::map<std::string, AlignedColumn> columns;
};

enum class ReturnKind { log_return, simple_return, scaled_difference };

struct ReturnSeries {
    std::string instrument_id;
    ReturnKind kind = ReturnKind::log_return;
    std::vector<double> values; // length = levels - 1, indexed by the later date
    double scale = 1.0;
};

/// Load one CSV of daily closes. Rows are sorted ascending by date;
/// duplicate dates and non-numeric cells are rejected.
ObservationSeries load_series(const std::string& path,
                              const std::string& date_column,
                              const std::string& value_column,
                              const std::string& date_format = "%Y-%m-%d",
                              const std::string& instrument_id = "");

/// Restrict every series to the reference calendar, filling calendar dates
/// missing from a source series by linear interpolation in calendar-day
/// time. Extrapolation is never performed.
AlignedPanel align_panel(const ObservationSeries& reference,
                         const std::vector<ObservationSeries>& others);

ReturnSeries compute_returns(std::span<const double> levels, ReturnKind kind,
                             double scale = 1.0,
                             const std::string& instrument_id = "");

ReturnKind return_kind_from_string(const std::string& name);
std::string to_string(ReturnKind kind);

} // namespace breakgauge
