#include "pvtwin/solar.hpp"

#include <algorithm>
#include <cmath>

namespace pvtwin {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kRad = kPi / 180.0;
constexpr double kEarthMeanRadiusKm = 6371.01;
constexpr double kAstronomicalUnitKm = 149597890.0;
constexpr double kSolarConstant = 1367.0;  // W/m2

}  // namespace

SolarPosition solar_position(const Timestamp& local, const GeoLocation& site) {
    // decimal UT hours; may step over midnight, which the day count absorbs
    const double hours_utc = local.minute_of_day / 60.0 - site.utc_offset_hours;
    // days since J2000.0 (2000-01-01 12:00 UT); civil day count keeps this exact
    const double elapsed =
        static_cast<double>(days_from_civil(local.date)) - 10957.5 + hours_utc / 24.0;

    // ecliptic coordinates (PSA series, radians)
    const double omega = 2.1429 - 0.0010394594 * elapsed;
    const double mean_longitude = 4.8950630 + 0.017202791698 * elapsed;
    const double mean_anomaly = 6.2400600 + 0.0172019699 * elapsed;
    const double ecliptic_longitude =
        mean_longitude + 0.03341607 * std::sin(mean_anomaly) +
        0.00034894 * std::sin(2.0 * mean_anomaly) - 0.0001134 - 0.0000203 * std::sin(omega);
    const double ecliptic_obliquity = 0.4090928 - 6.2140e-9 * elapsed + 0.0000396 * std::cos(omega);

    // celestial coordinates
    const double sin_ecl_long = std::sin(ecliptic_longitude);
    double right_ascension =
        std::atan2(std::cos(ecliptic_obliquity) * sin_ecl_long, std::cos(ecliptic_longitude));
    if (right_ascension < 0.0) right_ascension += kTwoPi;
    const double declination = std::asin(std::sin(ecliptic_obliquity) * sin_ecl_long);

    // local horizontal coordinates
    const double gmst = 6.6974243242 + 0.0657098283 * elapsed + hours_utc;
    const double lmst = (gmst * 15.0 + site.longitude_deg) * kRad;
    const double hour_angle = lmst - right_ascension;
    const double lat = site.latitude_deg * kRad;
    const double cos_lat = std::cos(lat);
    const double sin_lat = std::sin(lat);
    const double cos_ha = std::cos(hour_angle);
    double zenith = std::acos(std::clamp(
        cos_lat * cos_ha * std::cos(declination) + std::sin(declination) * sin_lat, -1.0, 1.0));
    double azimuth =
        std::atan2(-std::sin(hour_angle), std::tan(declination) * cos_lat - sin_lat * cos_ha);
    if (azimuth < 0.0) azimuth += kTwoPi;
    // topocentric parallax shift
    zenith += (kEarthMeanRadiusKm / kAstronomicalUnitKm) * std::sin(zenith);

    return SolarPosition{zenith / kRad, azimuth / kRad, declination / kRad};
}

double cos_incidence(const SolarPosition& sun, const ArrayOrientation& plane) {
    const double z = sun.zenith_deg * kRad;
    const double tilt = plane.tilt_deg * kRad;
    const double cosi = std::cos(z) * std::cos(tilt) +
                        std::sin(z) * std::sin(tilt) *
                            std::cos((sun.azimuth_deg - plane.azimuth_deg) * kRad);
    return std::max(0.0, cosi);
}

ClearSkyIrradiance clear_sky_components(const Timestamp& local, const GeoLocation& site,
                                        const ArrayOrientation& plane) {
    const SolarPosition sun = solar_position(local, site);
    if (sun.zenith_deg >= 90.0) return ClearSkyIrradiance{};

    const double cos_z = std::cos(sun.zenith_deg * kRad);
    // Kasten & Young 1989 relative air mass
    const double air_mass =
        1.0 / (cos_z + 0.50572 * std::pow(96.07995 - sun.zenith_deg, -1.6364));

    const double doy = static_cast<double>(day_of_year(local.date));
    const double e0 = kSolarConstant * (1.0 + 0.033 * std::cos(kTwoPi * doy / 365.0));

    // altitude term of the Meinel/Laue model; clamped where the linear form
    // stops making sense (h ~ 7 km would drive the coefficient negative)
    const double h_km = std::clamp(site.altitude_m / 1000.0, 0.0, 7.0);
    const double attenuation = std::pow(0.7, std::pow(air_mass, 0.678));
    const double dni = e0 * ((1.0 - 0.14 * h_km) * attenuation + 0.14 * h_km);

    ClearSkyIrradiance out;
    out.dni = dni;
    out.dhi = 0.10 * dni * cos_z;
    out.ghi = dni * cos_z + out.dhi;

    const double tilt = plane.tilt_deg * kRad;
    const double beam = dni * cos_incidence(sun, plane);
    const double sky = out.dhi * (1.0 + std::cos(tilt)) / 2.0;
    const double ground = 0.2 * out.ghi * (1.0 - std::cos(tilt)) / 2.0;
    out.poa = beam + sky + ground;
    return out;
}

double clear_sky_poa(const Timestamp& local, const GeoLocation& site,
                     const ArrayOrientation& plane) {
    return clear_sky_components(local, site, plane).poa;
}

}  // namespace pvtwin
