#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace chronicle {

// A UTC calendar day. Stored as year/month/day; all arithmetic goes
// through the proleptic-Gregorian day number so ordering and "next day"
// are exact.
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (negative before the epoch).
    std::int64_t day_number() const;
    Date next() const;

    std::string to_string() const;  // "YYYY-MM-DD"

    // Parses "YYYY-MM-DD"; throws DataError on anything else.
    static Date parse(const std::string& s);
    static Date from_day_number(std::int64_t n);
    static bool valid(int year, int month, int day);
};

}  // namespace chronicle
