#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace roadpulse {

// Calendar date, stored as days since 1970-01-01 (proleptic Gregorian).
// Text form is strict YYYY-MM-DD everywhere.
class Date {
public:
    Date() = default;

    static Date from_ymd(int year, int month, int day);
    static Date parse(const std::string& text);
    static Date from_serial(std::int32_t days) { return Date(days); }

    std::int32_t serial() const { return days_; }
    Date plus_days(int n) const { return Date(days_ + n); }
    std::string to_string() const;

    auto operator<=>(const Date&) const = default;

private:
    explicit Date(std::int32_t days) : days_(days) {}

    std::int32_t days_ = 0;
};

} // namespace roadpulse
