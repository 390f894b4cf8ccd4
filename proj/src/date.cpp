#include "chronicle/date.hpp"

#include <array>
#include <cstdio>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m == 2 && leap(y)) return 29;
    return lengths[m - 1];
}

}  // namespace

bool Date::valid(int year, int month, int day) {
    return month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

// Howard Hinnant's days-from-civil algorithm.
std::int64_t Date::day_number() const {
    std::int64_t y = year;
    if (month <= 2) y -= 1;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const std::int64_t yoe = y - era * 400;
    const std::int64_t doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

Date Date::from_day_number(std::int64_t n) {
    std::int64_t z = n + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const std::int64_t doe = z - era * 146097;
    const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = yoe + era * 400;
    const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const std::int64_t mp = (5 * doy + 2) / 153;
    const int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    const int m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    return Date{static_cast<int>(y + (m <= 2)), m, d};
}

Date Date::next() const { return from_day_number(day_number() + 1); }

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char trailing = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &trailing) != 3 ||
        s.size() != 10 || !valid(y, m, d)) {
        throw DataError("invalid date '" + s + "', expected YYYY-MM-DD");
    }
    return Date{y, m, d};
}

}  // namespace chronicle
