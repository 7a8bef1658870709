#pragma once

#include <compare>
#include <string>

namespace breakgauge {

/// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
public:
    Date() = default;
    static Date from_ymd(int year, int month, int day);
    static Date from_days(int days) { return Date(days); }

    /// Parse with a strptime-like pattern restricted to %Y, %m, %d and
    /// literal separators, e.g. "%Y-%m-%d" or "%d/%m/%Y".
    static Date parse(const std::string& text, const std::string& format = "%Y-%m-%d");

    int days_since_epoch() const { return days_; }
    int year() const;
    int month() const;
    int day() const;

    /// ISO 8601 (YYYY-MM-DD).
    std::string iso() const;

    Date operator+(int d) const { return Date(days_ + d); }
    Date operator-(int d) const { return Date(days_ - d); }
    int operator-(Date other) const { return days_ - other.days_; }
    auto operator<=>(const Date&) const = default;

private:
    explicit Date(int days) : days_(days) {}
    int days_ = 0;
};

} // namespace breakgauge
