#include "masar/astro.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "masar/errors.hpp"

namespace masar {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;
constexpr double kHorizonAltitudeDeg = -0.833;  // refraction + semidiameter

double wrap360(double deg) {
    deg = std::fmod(deg, 360.0);
    return deg < 0 ? deg + 360.0 : deg;
}

}  // namespace

double julian_day(const GregorianDate& g, double hours_utc) {
    // serial days since 1970-01-01; JD of that midnight is 2440587.5
    return 2440587.5 + static_cast<double>(days_from_gregorian(g)) + hours_utc / 24.0;
}

SolarPosition solar_position(double jd) {
    double n = jd - 2451545.0;  // days since J2000.0
    double mean_longitude = wrap360(280.460 + 0.9856474 * n);
    double mean_anomaly = wrap360(357.528 + 0.9856003 * n) * kDegToRad;
    double ecliptic_longitude =
        (mean_longitude + 1.915 * std::sin(mean_anomaly) + 0.020 * std::sin(2.0 * mean_anomaly)) * kDegToRad;
    double obliquity = (23.439 - 0.0000004 * n) * kDegToRad;

    double declination = std::asin(std::sin(obliquity) * std::sin(ecliptic_longitude));
    double right_ascension =
        std::atan2(std::cos(obliquity) * std::sin(ecliptic_longitude), std::cos(ecliptic_longitude));
    double ra_deg = wrap360(right_ascension * kRadToDeg);

    double eot_deg = mean_longitude - ra_deg;
    // wrap into (-180, 180] then to minutes of time
    eot_deg = std::fmod(eot_deg + 540.0, 360.0) - 180.0;
    return {declination * kRadToDeg, eot_deg * 4.0};
}

namespace {

// Hour angle (degrees) at which the sun's altitude equals `altitude_deg`,
// or nullopt when that altitude is never reached.
std::optional<double> hour_angle_deg(double lat_deg, double decl_deg, double altitude_deg) {
    double lat = lat_deg * kDegToRad;
    double decl = decl_deg * kDegToRad;
    double alt = altitude_deg * kDegToRad;
    double cos_h = (std::sin(alt) - std::sin(lat) * std::sin(decl)) / (std::cos(lat) * std::cos(decl));
    if (cos_h < -1.0 || cos_h > 1.0) return std::nullopt;
    return std::acos(cos_h) * kRadToDeg;
}

// Solar transit in hours UTC, refined once so the equation of time is taken
// near the event rather than at midnight.
double transit_utc(double lon_deg, const GregorianDate& date) {
    double estimate = 12.0 - lon_deg / 15.0;
    for (int i = 0; i < 2; ++i) {
        SolarPosition sp = solar_position(julian_day(date, estimate));
        estimate = 12.0 - lon_deg / 15.0 - sp.equation_of_time_min / 60.0;
    }
    return estimate;
}

std::optional<double> event_time(double lat_deg, const GregorianDate& date, double transit,
                                 double altitude_deg, bool morning) {
    double estimate = transit;
    for (int i = 0; i < 2; ++i) {
        SolarPosition sp = solar_position(julian_day(date, estimate));
        auto h = hour_angle_deg(lat_deg, sp.declination_deg, altitude_deg);
        if (!h) return std::nullopt;
        estimate = morning ? transit - *h / 15.0 : transit + *h / 15.0;
    }
    return estimate;
}

std::optional<double> asr_time(double lat_deg, const GregorianDate& date, double transit,
                               double shadow_factor) {
    double estimate = transit + 3.0;
    for (int i = 0; i < 2; ++i) {
        SolarPosition sp = solar_position(julian_day(date, estimate));
        // altitude when shadow length = factor * object + noon shadow
        double alt = std::atan(1.0 / (shadow_factor +
                                      std::tan(std::fabs(lat_deg - sp.declination_deg) * kDegToRad))) *
                     kRadToDeg;
        auto h = hour_angle_deg(lat_deg, sp.declination_deg, alt);
        if (!h) return std::nullopt;
        estimate = transit + *h / 15.0;
    }
    return estimate;
}

}  // namespace

PrayerTimes prayer_times(double latitude_deg, double longitude_deg, const GregorianDate& date,
                         const MethodParams& method, double utc_offset_hours) {
    if (std::fabs(latitude_deg) > 90.0 || std::fabs(longitude_deg) > 180.0)
        throw InvalidInput("coordinates out of range");
    if (!is_valid_gregorian(date)) throw InvalidInput("invalid date " + format_gregorian(date));

    PrayerTimes out;
    out.method = method;
    out.utc_offset_hours = utc_offset_hours;

    double transit = transit_utc(longitude_deg, date);
    auto shift = [utc_offset_hours](std::optional<double> t) -> std::optional<double> {
        if (!t) return std::nullopt;
        return *t + utc_offset_hours;
    };

    out.dhuhr = shift(transit);
    out.sunrise = shift(event_time(latitude_deg, date, transit, kHorizonAltitudeDeg, true));
    out.maghrib = shift(event_time(latitude_deg, date, transit, kHorizonAltitudeDeg, false));
    out.fajr = shift(event_time(latitude_deg, date, transit, -method.fajr_angle_deg, true));
    out.isha = shift(event_time(latitude_deg, date, transit, -method.isha_angle_deg, false));
    out.asr = shift(asr_time(latitude_deg, date, transit, method.asr_shadow_factor));
    return out;
}

double qibla_bearing(double latitude_deg, double longitude_deg, double kaaba_lat, double kaaba_lon) {
    if (std::fabs(latitude_deg) > 90.0 || std::fabs(longitude_deg) > 180.0)
        throw InvalidInput("coordinates out of range");

    double lat = latitude_deg * kDegToRad;
    double lon = longitude_deg * kDegToRad;
    double klat = kaaba_lat * kDegToRad;
    double klon = kaaba_lon * kDegToRad;
    double dlon = klon - lon;

    // central angle, for the degenerate guard
    double cos_c = std::sin(lat) * std::sin(klat) + std::cos(lat) * std::cos(klat) * std::cos(dlon);
    cos_c = std::clamp(cos_c, -1.0, 1.0);
    double sep = std::acos(cos_c);
    constexpr double kDegenerate = 1e-9;
    if (sep < kDegenerate) throw DegenerateLocation("location coincides with the Kaaba");
    if (kPi - sep < kDegenerate) throw DegenerateLocation("location is antipodal to the Kaaba");

    double y = std::sin(dlon);
    double x = std::cos(lat) * std::tan(klat) - std::sin(lat) * std::cos(dlon);
    double bearing = std::atan2(y, x) * kRadToDeg;
    return wrap360(bearing);
}

std::string format_clock(double hours) {
    double h = std::fmod(hours, 24.0);
    if (h < 0) h += 24.0;
    int total_minutes = static_cast<int>(std::lround(h * 60.0)) % (24 * 60);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", total_minutes / 60, total_minutes % 60);
    return buf;
}

MethodPresets MethodPresets::builtin_default() {
    MethodPresets p;
    p.presets_["default"] = {"default", 18.0, 18.0, 1.0};
    p.presets_["mwl"] = {"mwl", 18.0, 17.0, 1.0};
    p.presets_["isna"] = {"isna", 15.0, 15.0, 1.0};
    p.presets_["egyptian"] = {"egyptian", 19.5, 17.5, 1.0};
    p.presets_["hanafi_asr"] = {"hanafi_asr", 18.0, 18.0, 2.0};
    return p;
}

MethodPresets MethodPresets::parse(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    MethodPresets p = builtin_default();
    if (j.contains("kaaba")) {
        p.kaaba_lat_ = j["kaaba"].value("latitude", p.kaaba_lat_);
        p.kaaba_lon_ = j["kaaba"].value("longitude", p.kaaba_lon_);
    }
    if (j.contains("default_method")) p.default_name_ = j["default_method"].get<std::string>();
    if (j.contains("methods")) {
        for (const auto& [name, m] : j["methods"].items()) {
            MethodParams params;
            params.name = name;
            params.fajr_angle_deg = m.value("fajr_angle", 18.0);
            params.isha_angle_deg = m.value("isha_angle", 18.0);
            params.asr_shadow_factor = m.value("asr_shadow_factor", 1.0);
            p.presets_[name] = params;
        }
    }
    if (!p.presets_.count(p.default_name_))
        throw InvalidInput("default prayer method '" + p.default_name_ + "' is not defined");
    return p;
}

MethodPresets MethodPresets::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open almanac config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const MethodParams& MethodPresets::get(const std::string& name) const {
    auto it = presets_.find(name);
    if (it == presets_.end()) throw InvalidInput("unknown prayer method preset '" + name + "'");
    return it->second;
}

}  // namespace masar
