#pragma once

#include <string>
#include <vector>

namespace breakgauge {

/// Rectangular report table; cells are pre-formatted strings.
struct Table {
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
};

/// Write one table; format is "csv" (RFC-4180 quoting) or "markdown".
void emit_table(const Table& table, const std::string& format,
                const std::string& path);

/// Fixed 4-decimal rendering used in every emitted table.
std::string format_real(double v);
std::string stars_text(int stars);

} // namespace breakgauge
