#pragma once

#include <cstdint>
#include <string>

namespace pvtwin {

// Calendar date in the plant's local standard time. All series in this
// library carry local timestamps with a fixed UTC offset; no DST handling.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    auto operator<=>(const Date&) const = default;
};

// One sample instant: local date plus minute of day. The canonical cadence
// is 5 minutes, i.e. 288 slots per day, but Timestamp itself is cadence-free.
struct Timestamp {
    Date date;
    int minute_of_day = 0;  // 0..1439

    auto operator<=>(const Timestamp&) const = default;
};

inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kSlotMinutes = 5;
inline constexpr int kSlotsPerDay = kMinutesPerDay / kSlotMinutes;

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool valid_date(const Date& d);

// Days since 1970-01-01 (proleptic Gregorian). Negative before the epoch.
std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t z);

// 1..365/366
int day_of_year(const Date& d);

Date add_days(const Date& d, std::int64_t n);
std::int64_t days_between(const Date& from, const Date& to);

// Fractional hours since local midnight, e.g. 12:30 -> 12.5.
double hour_of_day(const Timestamp& t);

// Index of the 5-minute slot containing this timestamp (0..287).
int slot_of_day(const Timestamp& t);

// "YYYY-MM-DD"
std::string format_date(const Date& d);
// ISO-8601 without zone suffix, "YYYY-MM-DDTHH:MM:SS"; seconds always 0 here.
std::string format_timestamp(const Timestamp& t);

// Strict parsers; return false on malformed input without touching `out`.
bool parse_date(const std::string& text, Date& out);
bool parse_timestamp(const std::string& text, Timestamp& out);

}  // namespace pvtwin
