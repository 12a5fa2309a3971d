#include "pvtwin/timeutil.hpp"

#include <cstdio>

namespace pvtwin {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) return 0;
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

bool valid_date(const Date& d) {
    return d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= days_in_month(d.year, d.month);
}

// Howard Hinnant's civil calendar algorithms: exact for the proleptic
// Gregorian calendar over the full int range.
std::int64_t days_from_civil(const Date& d) {
    std::int64_t y = d.year;
    const int m = d.month;
    const int day = d.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

int day_of_year(const Date& d) {
    return static_cast<int>(days_from_civil(d) - days_from_civil(Date{d.year, 1, 1})) + 1;
}

Date add_days(const Date& d, std::int64_t n) {
    return civil_from_days(days_from_civil(d) + n);
}

std::int64_t days_between(const Date& from, const Date& to) {
    return days_from_civil(to) - days_from_civil(from);
}

double hour_of_day(const Timestamp& t) {
    return t.minute_of_day / 60.0;
}

int slot_of_day(const Timestamp& t) {
    return t.minute_of_day / kSlotMinutes;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::string format_timestamp(const Timestamp& t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:00",
                  t.date.year, t.date.month, t.date.day,
                  t.minute_of_day / 60, t.minute_of_day % 60);
    return buf;
}

bool parse_date(const std::string& text, Date& out) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (text[i] < '0' || text[i] > '9') return false;
    Date d;
    d.year = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
    d.month = (text[5] - '0') * 10 + (text[6] - '0');
    d.day = (text[8] - '0') * 10 + (text[9] - '0');
    if (!valid_date(d)) return false;
    out = d;
    return true;
}

bool parse_timestamp(const std::string& text, Timestamp& out) {
    // accepts "YYYY-MM-DDTHH:MM" and "YYYY-MM-DDTHH:MM:SS" (seconds must be 00),
    // with 'T' or ' ' as the separator
    if (text.size() != 16 && text.size() != 19) return false;
    if (text[10] != 'T' && text[10] != ' ') return false;
    if (text[13] != ':') return false;
    Date d;
    if (!parse_date(text.substr(0, 10), d)) return false;
    for (int i : {11, 12, 14, 15})
        if (text[i] < '0' || text[i] > '9') return false;
    const int hh = (text[11] - '0') * 10 + (text[12] - '0');
    const int mm = (text[14] - '0') * 10 + (text[15] - '0');
    if (hh > 23 || mm > 59) return false;
    if (text.size() == 19 && text.substr(16) != ":00") return false;
    out = Timestamp{d, hh * 60 + mm};
    return true;
}

}  // namespace pvtwin
