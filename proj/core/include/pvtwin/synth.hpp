#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pvtwin/rng.hpp"
#include "pvtwin/sky.hpp"

namespace pvtwin {

// One generated weather day on the 5-minute grid.
struct SynthDay {
    Date date;
    SkyCategory category = SkyCategory::SC3;      // requested class
    SkyCategory envelope_category = SkyCategory::SC3;  // class actually used (fallback)
    std::array<double, kSlotsPerDay> g_poa{};
    std::array<double, kSlotsPerDay> t_amb{};
    std::array<double, kSlotsPerDay> t_cell{};
    std::array<bool, kSlotsPerDay> noct_fallback{};  // temperature came from the NOCT model
};

// cell temperature from the nominal-operating-cell-temperature model:
// T_cell = T_amb + ((T_NOCT - 20) / 800) * G
double noct_cell_temp(double t_amb, double g_poa, double noct_c);

// Per-slot irradiance draw: truncated Gaussian centered on the envelope mean
// with sigma = (max - min) / 6, confined to [min, max]. Slots with an empty
// or all-zero envelope stay 0.
std::array<double, kSlotsPerDay> synth_irradiance(const DailyEnvelope& env, RngStream& rng);

struct SynthTemperature {
    double t_amb = 0.0;
    double t_cell = 0.0;
    bool noct_fallback = false;
};

// Conditional temperature draw: historical samples of the same bucket whose
// irradiance lies within a +-2.5% band of g are fitted with a Gaussian and
// sampled. The band doubles until samples appear (capped at +-20%); past the
// cap the NOCT model takes over with the bucket's mean ambient temperature.
SynthTemperature synth_temperature(double g, const std::vector<WeatherSample>& pool,
                                   double noct_c, RngStream& rng);

struct SynthOptions {
    int month = 1;
    SkyCategory category = SkyCategory::SC3;
    int n_days = 90;
    int start_year = 2022;
    double noct_c = 45.0;
    std::uint64_t seed = 1;
};

// Generates n_days synthetic days for one (month, category). Dates stay in
// the requested month, rolling into the same month of following years when
// n_days exceeds the month length. Fully deterministic under the seed.
std::vector<SynthDay> generate_synthetic_days(const EnvelopeSet& envelopes,
                                              const SynthOptions& opt);

// Flattens generated days into a weather series for the production model.
MeteoSeries to_meteo_series(const std::vector<SynthDay>& days);

}  // namespace pvtwin
