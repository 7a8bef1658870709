#include "breakgauge/series.hpp"

#include "breakgauge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace breakgauge {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name, const std::string& path) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw ValidationError(path + ": no column named '" + name + "' in header");
    return static_cast<std::size_t>(it - header.begin());
}

} // namespace

void ObservationSeries::validate(bool require_positive) const {
    if (dates.size() != values.size())
        throw ValidationError(instrument_id + ": dates and values length mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw ValidationError(instrument_id + ": non-finite value at " +
                                  dates[i].iso());
        if (require_positive && values[i] <= 0.0)
            throw ValidationError(instrument_id + ": non-positive level at " +
                                  dates[i].iso());
        if (i > 0 && !(dates[i - 1] < dates[i]))
            throw ValidationError(instrument_id + ": dates not strictly increasing at " +
                                  dates[i].iso());
    }
}

ObservationSeries load_series(const std::string& path,
                              const std::string& date_column,
                              const std::string& value_column,
                              const std::string& date_format,
                              const std::string& instrument_id) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(path + ": empty file, header row required");
    auto header = split_csv_line(line);
    std::size_t di = find_column(header, date_column, path);
    std::size_t vi = find_column(header, value_column, path);

    std::vector<std::pair<Date, double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() <= std::max(di, vi))
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": too few columns");
        Date d;
        try {
            d = Date::parse(cells[di], date_format);
        } catch (const Error& e) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(cells[vi], &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != cells[vi].size())
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": non-numeric value '" + cells[vi] + "'");
        rows.emplace_back(d, v);
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw ValidationError(path + ": duplicate date " + rows[i].first.iso());

    ObservationSeries s;
    s.instrument_id = instrument_id.empty() ? path : instrument_id;
    s.dates.reserve(rows.size());
    s.values.reserve(rows.size());
    for (auto& [d, v] : rows) {
        s.dates.push_back(d);
        s.values.push_back(v);
    }
    s.validate();
    return s;
}

AlignedPanel align_panel(const ObservationSeries& reference,
                         const std::vector<ObservationSeries>& others) {
    reference.validate();
    AlignedPanel panel;
    panel.calendar = reference.dates;
    if (panel.calendar.empty()) throw ValidationError("empty reference calendar");

    AlignedColumn ref_col;
    ref_col.values = reference.values;
    ref_col.interpolated.assign(reference.values.size(), 0);
    panel.columns.emplace(reference.instrument_id, std::move(ref_col));

    for (const auto& s : others) {
        s.validate();
        if (s.dates.empty() || s.dates.back() < panel.calendar.front() ||
            panel.calendar.back() < s.dates.front())
            throw ValidationError(s.instrument_id +
                                  ": no overlap with the reference calendar");
        if (panel.calendar.front() < s.dates.front())
            throw ValidationError(s.instrument_id +
                                  ": extrapolation required before " +
                                  s.dates.front().iso());
        if (s.dates.back() < panel.calendar.back())
            throw ValidationError(s.instrument_id + ": extrapolation required after " +
                                  s.dates.back().iso());

        AlignedColumn col;
        col.values.reserve(panel.calendar.size());
        col.interpolated.reserve(panel.calendar.size());
        std::size_t j = 0; // first source index with date >= calendar date
        for (const Date& d : panel.calendar) {
            while (j < s.dates.size() && s.dates[j] < d) ++j;
            if (j < s.dates.size() && s.dates[j] == d) {
                col.values.push_back(s.values[j]);
                col.interpolated.push_back(0);
            } else {
                // between s.dates[j-1] and s.dates[j]; both exist by the
                // extrapolation checks above
                const Date& lo = s.dates[j - 1];
                const Date& hi = s.dates[j];
                double w = static_cast<double>(d - lo) / static_cast<double>(hi - lo);
                col.values.push_back(s.values[j - 1] +
                                     w * (s.values[j] - s.values[j - 1]));
                col.interpolated.push_back(1);
            }
        }
        panel.columns.emplace(s.instrument_id, std::move(col));
    }
    return panel;
}

ReturnSeries compute_returns(std::span<const double> levels, ReturnKind kind,
                             double scale, const std::string& instrument_id) {
    if (levels.size() < 2)
        throw ValidationError(instrument_id + ": need at least 2 levels for returns");
    if (scale <= 0.0) throw ValidationError("return scale must be positive");

    ReturnSeries r;
    r.instrument_id = instrument_id;
    r.kind = kind;
    r.scale = scale;
    r.values.reserve(levels.size() - 1);
    for (std::size_t t = 1; t < levels.size(); ++t) {
        double prev = levels[t - 1], cur = levels[t];
        switch (kind) {
        case ReturnKind::log_return:
            if (prev <= 0.0 || cur <= 0.0)
                throw NumericalError(instrument_id +
                                     ": non-positive level under log returns");
            r.values.push_back(std::log(cur / prev));
            break;
        case ReturnKind::simple_return:
            r.values.push_back(cur / prev - 1.0);
            break;
        case ReturnKind::scaled_difference:
            r.values.push_back((cur - prev) / scale);
            break;
        }
    }
    return r;
}

ReturnKind return_kind_from_string(const std::string& name) {
    if (name == "log" || name == "log_return") return ReturnKind::log_return;
    if (name == "simple" || name == "simple_return") return ReturnKind::simple_return;
    if (name == "scaled_difference" || name == "diff")
        return ReturnKind::scaled_difference;
    throw ValidationError("unknown return kind: " + name);
}

std::string to_string(ReturnKind kind) {
    switch (kind) {
    case ReturnKind::log_return: return "log_return";
    case ReturnKind::simple_return: return "simple_return";
    case ReturnKind::scaled_difference: return "scaled_difference";
    }
    return "?";
}

} // namespace breakgauge
