#include "masar/hijri.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "masar/text.hpp"

namespace masar {

namespace {

// 30-year intercalation cycle: 19 common years of 354 days, 11 leap years of 355.
constexpr std::int64_t kCycleDays = 19 * 354 + 11 * 355;  // 10631

// Serial of 1 Muharram 1 AH (civil epoch) = 19 July 622 proleptic Gregorian.
std::int64_t hijri_epoch_days() {
    static const std::int64_t epoch = days_from_gregorian({622, 7, 19});
    return epoch;
}

// Leap years in years 1..n of a cycle.
std::int64_t leaps_through(std::int64_t n) {
    return (11 * n + 14) / 30;
}

}  // namespace

std::int64_t days_from_gregorian(const GregorianDate& g) {
    // Howard Hinnant's days_from_civil, valid over the proleptic calendar.
    std::int64_t y = g.year;
    unsigned m = static_cast<unsigned>(g.month);
    unsigned d = static_cast<unsigned>(g.day);
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

GregorianDate gregorian_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

bool is_valid_gregorian(const GregorianDate& g) {
    if (g.month < 1 || g.month > 12 || g.day < 1) return false;
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int len = lengths[g.month - 1];
    bool leap = (g.year % 4 == 0 && g.year % 100 != 0) || g.year % 400 == 0;
    if (g.month == 2 && leap) len = 29;
    return g.day <= len;
}

bool hijri_is_leap_year(int year) {
    std::int64_t r = ((11LL * year + 14) % 30 + 30) % 30;
    return r < 11;
}

int hijri_month_length(int year, int month) {
    if (month == 12) return hijri_is_leap_year(year) ? 30 : 29;
    return (month % 2 == 1) ? 30 : 29;
}

int hijri_year_length(int year) {
    return hijri_is_leap_year(year) ? 355 : 354;
}

bool is_valid_hijri(const HijriDate& h) {
    if (h.year < 1 || h.month < 1 || h.month > 12 || h.day < 1) return false;
    return h.day <= hijri_month_length(h.year, h.month);
}

std::int64_t days_from_hijri(const HijriDate& h) {
    if (!is_valid_hijri(h))
        throw InvalidHijriDate("invalid Hijri date " + format_hijri(h));
    std::int64_t y = h.year - 1;
    std::int64_t days = y * 354 + leaps_through(y);
    // months before h.month: odd months 30 days, even 29
    std::int64_t m = h.month - 1;
    days += 30 * ((m + 1) / 2) + 29 * (m / 2);
    days += h.day - 1;
    return hijri_epoch_days() + days;
}

HijriDate hijri_from_days(std::int64_t serial) {
    std::int64_t offset = serial - hijri_epoch_days();
    std::int64_t cycle = offset >= 0 ? offset / kCycleDays : (offset - kCycleDays + 1) / kCycleDays;
    std::int64_t within = offset - cycle * kCycleDays;

    int year = static_cast<int>(cycle * 30) + 1;
    while (true) {
        int len = hijri_year_length(year);
        if (within < len) break;
        within -= len;
        ++year;
    }
    int month = 1;
    while (true) {
        int len = hijri_month_length(year, month);
        if (within < len) break;
        within -= len;
        ++month;
    }
    return {year, month, static_cast<int>(within) + 1};
}

namespace {

void check_supported(const GregorianDate& g) {
    if (g.year < kMinSupportedGregorianYear || g.year > kMaxSupportedGregorianYear)
        throw OutOfRange("date " + format_gregorian(g) + " outside supported years " +
                         std::to_string(kMinSupportedGregorianYear) + ".." +
                         std::to_string(kMaxSupportedGregorianYear));
}

}  // namespace

HijriDate gregorian_to_hijri(const GregorianDate& g) {
    if (!is_valid_gregorian(g)) throw InvalidInput("invalid Gregorian date " + format_gregorian(g));
    check_supported(g);
    return hijri_from_days(days_from_gregorian(g));
}

GregorianDate hijri_to_gregorian(const HijriDate& h) {
    GregorianDate g = gregorian_from_days(days_from_hijri(h));
    check_supported(g);
    return g;
}

EventTable EventTable::parse(const std::string& content) {
    EventTable table;
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = text::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        nlohmann::json j = nlohmann::json::parse(trimmed, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw InvalidInput("event line " + std::to_string(line_no) + " is not a JSON object");
        CalendarEvent e;
        e.month = j.at("month").get<int>();
        e.day = j.at("day").get<int>();
        e.name = j.at("name").get<std::string>();
        if (e.month < 1 || e.month > 12 || e.day < 1 || e.day > 30)
            throw InvalidInput("event line " + std::to_string(line_no) + " has an invalid Hijri day");
        table.events_.push_back(std::move(e));
    }
    return table;
}

EventTable EventTable::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open event table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::vector<CalendarEvent> EventTable::on(int month, int day) const {
    std::vector<CalendarEvent> out;
    for (const auto& e : events_)
        if (e.month == month && e.day == day) out.push_back(e);
    return out;
}

std::vector<CalendarEvent> EventTable::find(const std::string& name_fragment) const {
    std::vector<CalendarEvent> out;
    std::string needle = text::normalize_arabic(name_fragment);
    for (const auto& e : events_)
        if (text::normalize_arabic(e.name).find(needle) != std::string::npos) out.push_back(e);
    return out;
}

std::string format_gregorian(const GregorianDate& g) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", g.year, g.month, g.day);
    return buf;
}

std::string format_hijri(const HijriDate& h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d AH", h.year, h.month, h.day);
    return buf;
}

}  // namespace masar
