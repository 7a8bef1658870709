#include "breakgauge/table.hpp"

#include "breakgauge/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace breakgauge {
namespace {

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "-";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string stars_text(int stars) {
    return std::string(static_cast<std::size_t>(stars), '*');
}

void emit_table(const Table& table, const std::string& format,
                const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);

    if (format == "csv") {
        for (std::size_t i = 0; i < table.header.size(); ++i)
            out << (i ? "," : "") << csv_escape(table.header[i]);
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << csv_escape(row[i]);
            out << "\n";
        }
    } else if (format == "markdown") {
        if (!table.title.empty()) out << "# " << table.title << "\n\n";
        out << "|";
        for (const auto& h : table.header) out << " " << h << " |";
        out << "\n|";
        for (std::size_t i = 0; i < table.header.size(); ++i) out << " --- |";
        out << "\n";
        for (const auto& row : table.rows) {
            out << "|";
            for (const auto& cell : row) out << " " << (cell.empty() ? " " : cell) << " |";
            out << "\n";
        }
    } else {
        throw ValidationError("unknown table format: " + format);
    }
    if (!out) throw ValidationError("write failure on " + path);
}

} // namespace breakgauge
