#pragma once

#include "pvtwin/timeutil.hpp"

namespace pvtwin {

struct GeoLocation {
    double latitude_deg = 0.0;    // +north
    double longitude_deg = 0.0;   // +east
    double altitude_m = 0.0;
    double utc_offset_hours = 0.0;  // fixed local standard offset, no DST
};

// Fixed-mount plane of array. Azimuth is degrees clockwise from north
// (90 = east, 180 = south), same convention as the solar azimuth below.
struct ArrayOrientation {
    double tilt_deg = 0.0;
    double azimuth_deg = 180.0;
};

struct SolarPosition {
    double zenith_deg = 0.0;       // 0 = sun overhead, >= 90 = below horizon
    double azimuth_deg = 0.0;      // clockwise from north
    double declination_deg = 0.0;
};

// Sun position for a local timestamp at the given site, computed with the
// Blanco-Muriel et al. 2001 (PSA) algorithm plus parallax correction.
SolarPosition solar_position(const Timestamp& local, const GeoLocation& site);

struct ClearSkyIrradiance {
    double dni = 0.0;  // beam normal, W/m2
    double dhi = 0.0;  // diffuse horizontal, W/m2
    double ghi = 0.0;  // global horizontal, W/m2
    double poa = 0.0;  // plane-of-array global, W/m2
};

// Clear-sky irradiance on the array plane:
//  - extraterrestrial normal with Spencer-style eccentricity correction,
//  - Kasten & Young 1989 relative air mass,
//  - Meinel/Laue altitude-extended beam attenuation
//      DNI = E0 * ((1 - 0.14 h_km) * 0.7^(AM^0.678) + 0.14 h_km),
//  - diffuse taken as 10% of DNI projected on the horizontal,
//  - isotropic-sky transposition with ground albedo 0.2.
// Returns all-zero components when the sun is at or below the horizon.
ClearSkyIrradiance clear_sky_components(const Timestamp& local, const GeoLocation& site,
                                        const ArrayOrientation& plane);

// plane-of-array value only; the common entry point for the rest of the library
double clear_sky_poa(const Timestamp& local, const GeoLocation& site,
                     const ArrayOrientation& plane);

// cosine of the beam angle of incidence on the plane, clamped at 0
double cos_incidence(const SolarPosition& sun, const ArrayOrientation& plane);

}  // namespace pvtwin
