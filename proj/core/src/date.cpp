#include "breakgauge/date.hpp"

#include "breakgauge/errors.hpp"

#include <cctype>
#include <cstdio>

namespace breakgauge {
namespace {

// civil <-> day count, Howard Hinnant's algorithms
int days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

void civil_from_days(int z, int& y, int& m, int& d) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y += m <= 2;
}

bool days_in_month_ok(int y, int m, int d) {
    static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    int n = len[m - 1];
    if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) n = 29;
    return d <= n;
}

} // namespace

Date Date::from_ymd(int year, int month, int day) {
    if (!days_in_month_ok(year, month, day))
        throw ValidationError("invalid calendar date " + std::to_string(year) + "-" +
                              std::to_string(month) + "-" + std::to_string(day));
    return Date(days_from_civil(year, month, day));
}

Date Date::parse(const std::string& text, const std::string& format) {
    int y = -1, m = -1, d = -1;
    std::size_t ti = 0;
    for (std::size_t fi = 0; fi < format.size(); ++fi) {
        if (format[fi] == '%' && fi + 1 < format.size()) {
            char spec = format[++fi];
            int width = (spec == 'Y') ? 4 : 2;
            int value = 0, got = 0;
            while (got < width && ti < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[ti]))) {
                value = value * 10 + (text[ti++] - '0');
                ++got;
            }
            if (got == 0)
                throw ValidationError("cannot parse date '" + text + "' with format '" +
                                      format + "'");
            switch (spec) {
            case 'Y': y = value; break;
            case 'm': m = value; break;
            case 'd': d = value; break;
            default:
                throw ValidationError("unsupported date format specifier %" +
                                      std::string(1, spec));
            }
        } else {
            if (ti >= text.size() || text[ti] != format[fi])
                throw ValidationError("cannot parse date '" + text + "' with format '" +
                                      format + "'");
            ++ti;
        }
    }
    if (ti != text.size() || y < 0 || m < 0 || d < 0)
        throw ValidationError("cannot parse date '" + text + "' with format '" + format +
                              "'");
    return from_ymd(y, m, d);
}

int Date::year() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    return y;
}

int Date::month() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    return m;
}

int Date::day() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    return d;
}

std::string Date::iso() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

} // namespace breakgauge
