#pragma once

#include <map>
#include <optional>
#include <string>

#include "masar/hijri.hpp"

namespace masar {

struct SolarPosition {
    double declination_deg = 0.0;
    double equation_of_time_min = 0.0;  // apparent minus mean solar time
};

// Low-precision solar ephemeris (Astronomical Almanac approximation series),
// good to about a minute of time over the supported calendar window.
// jd is a full Julian date (UT).
SolarPosition solar_position(double jd);

double julian_day(const GregorianDate& g, double hours_utc);

struct MethodParams {
    std::string name = "default";
    double fajr_angle_deg = 18.0;   // solar depression at fajr
    double isha_angle_deg = 18.0;   // solar depression at isha
    double asr_shadow_factor = 1.0; // 1 = standard, 2 = later-afternoon convention
};

// Named calculation presets loaded from the almanac parameter file.
class MethodPresets {
  public:
    static MethodPresets builtin_default();
    static MethodPresets load_file(const std::string& path);
    static MethodPresets parse(const std::string& json_text);

    const MethodParams& get(const std::string& name) const;  // throws InvalidInput
    const MethodParams& default_method() const { return get(default_name_); }
    double kaaba_latitude() const { return kaaba_lat_; }
    double kaaba_longitude() const { return kaaba_lon_; }

  private:
    std::map<std::string, MethodParams> presets_;
    std::string default_name_ = "default";
    double kaaba_lat_ = 21.4225;
    double kaaba_lon_ = 39.8262;
};

// All times are hours since midnight UTC plus the requested fixed offset.
// A field is empty when the sun never reaches the required altitude that day
// (high latitudes); that is a per-field report, not a failure.
struct PrayerTimes {
    std::optional<double> fajr, sunrise, dhuhr, asr, maghrib, isha;
    MethodParams method;
    double utc_offset_hours = 0.0;
};

PrayerTimes prayer_times(double latitude_deg, double longitude_deg, const GregorianDate& date,
                         const MethodParams& method, double utc_offset_hours = 0.0);

// Initial great-circle bearing toward the Kaaba, degrees clockwise from true
// north in [0, 360). Throws DegenerateLocation at the Kaaba or its antipode.
double qibla_bearing(double latitude_deg, double longitude_deg, double kaaba_lat = 21.4225,
                     double kaaba_lon = 39.8262);

std::string format_clock(double hours);  // "HH:MM", wraps into [0,24)

}  // namespace masar
