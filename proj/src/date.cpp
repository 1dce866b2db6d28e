#include "roadpulse/common/date.hpp"

#include "roadpulse/common/error.hpp"

#include <chrono>
#include <cstdio>

namespace roadpulse {

namespace chr = std::chrono;

Date Date::from_ymd(int year, int month, int day) {
    const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                  chr::day{static_cast<unsigned>(day)}};
    if (!ymd.ok())
        fail("date", "invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) +
                         "-" + std::to_string(day));
    const chr::sys_days sd{ymd};
    return Date(static_cast<std::int32_t>(sd.time_since_epoch().count()));
}

Date Date::parse(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 || text.size() != 10)
        fail("date", "expected YYYY-MM-DD, got '" + text + "'");
    return from_ymd(y, m, d);
}

std::string Date::to_string() const {
    const chr::sys_days sd{chr::days{days_}};
    const chr::year_month_day ymd{sd};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace roadpulse
