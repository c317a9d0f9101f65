#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "masar/errors.hpp"

namespace masar {

struct GregorianDate {
    int year = 1970;  // proleptic Gregorian
    int month = 1;    // 1..12
    int day = 1;      // 1..31

    friend bool operator==(const GregorianDate&, const GregorianDate&) = default;
};

struct HijriDate {
    int year = 1;   // AH, positive
    int month = 1;  // 1..12
    int day = 1;    // 1..30

    friend bool operator==(const HijriDate&, const HijriDate&) = default;
};

// Civil serial: days since 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t days_from_gregorian(const GregorianDate& g);
GregorianDate gregorian_from_days(std::int64_t days);
bool is_valid_gregorian(const GregorianDate& g);

// Tabular (arithmetic) Hijri calendar, civil epoch: day 1 of year 1 falls on
// 19 July 622 proleptic Gregorian. Months alternate 30/29; month 12 has 30
// days in leap years; 11 leap years per 30-year cycle
// ({2,5,7,10,13,16,18,21,24,26,29}).
bool hijri_is_leap_year(int year);
int hijri_month_length(int year, int month);
int hijri_year_length(int year);
bool is_valid_hijri(const HijriDate& h);

// Unchecked arithmetic over the full proleptic range.
std::int64_t days_from_hijri(const HijriDate& h);  // throws InvalidHijriDate
HijriDate hijri_from_days(std::int64_t days);

// Range-checked conversions; the supported window is Gregorian years
// 1900..2200 inclusive. Exact inverses of each other on that window.
GregorianDate hijri_to_gregorian(const HijriDate& h);   // InvalidHijriDate / OutOfRange
HijriDate gregorian_to_hijri(const GregorianDate& g);   // OutOfRange

inline constexpr int kMinSupportedGregorianYear = 1900;
inline constexpr int kMaxSupportedGregorianYear = 2200;

struct CalendarEvent {
    int month = 1;  // hijri
    int day = 1;
    std::string name;
};

// JSONL table of {month, day, name} entries keyed by Hijri month/day.
class EventTable {
  public:
    static EventTable load_file(const std::string& path);
    static EventTable parse(const std::string& content);

    std::vector<CalendarEvent> on(int month, int day) const;
    // Case/diacritic-insensitive substring lookup by event name.
    std::vector<CalendarEvent> find(const std::string& name_fragment) const;
    const std::vector<CalendarEvent>& all() const { return events_; }

  private:
    std::vector<CalendarEvent> events_;
};

std::string format_gregorian(const GregorianDate& g);
std::string format_hijri(const HijriDate& h);

}  // namespace masar
