#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "pvtwin/series.hpp"
#include "pvtwin/solar.hpp"

namespace pvtwin {

// Daily sky condition classes by clearness index k = G_POA / G_clearsky:
//   SC1 completely overcast  [0, 0.2]
//   SC2 mostly overcast      (0.2, 0.4]
//   SC3 partly cloudy        (0.4, 0.6]
//   SC4 mostly clear         (0.6, 0.67]
//   SC5 completely clear     (0.67, 1]
enum class SkyCategory : int { SC1 = 1, SC2 = 2, SC3 = 3, SC4 = 4, SC5 = 5 };

const char* sky_category_name(SkyCategory c);
// representative k of each class, used for nearest-category fallbacks
double sky_category_center(SkyCategory c);

// point clearness index, clamped to [0, 1]; 0 when the clear-sky value is 0
double clearness_index(double g_poa, double g_clear);

SkyCategory classify_sky(double k);

// daily clearness index: sum(G_POA) / sum(G_clearsky) over the day, clamped
double daily_clearness(const std::vector<double>& g_poa, const std::vector<double>& g_clear);

// Clear-sky plane-of-array profile for one date on the 5-minute grid.
std::array<double, kSlotsPerDay> clear_sky_day_profile(const Date& date, const GeoLocation& site,
                                                       const ArrayOrientation& plane);

// Per-day categories for an arbitrary series (used by envelope building,
// threshold grouping and feature extraction). Returns one entry per
// day_ranges() element.
struct DayClassification {
    Date date;
    double k_daily = 0.0;
    SkyCategory category = SkyCategory::SC1;
};

std::vector<DayClassification> classify_days(const std::vector<Timestamp>& t,
                                             const std::vector<double>& g_poa,
                                             const GeoLocation& site,
                                             const ArrayOrientation& plane);

// Per-slot irradiance envelope of one (month, category) bucket.
struct SlotEnvelope {
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;
    int count = 0;
};

struct DailyEnvelope {
    std::array<SlotEnvelope, kSlotsPerDay> slots{};
    int day_count = 0;
};

// historical (G, T_amb, T_cell) sample used for conditional temperature draws
struct WeatherSample {
    double g_poa = 0.0;
    double t_amb = 0.0;
    double t_cell = 0.0;
};

// Envelopes plus temperature pools per (month, category). Buckets that saw
// no historical day are simply absent; find_nearest() falls back to the
// category closest in clearness within the same month.
class EnvelopeSet {
public:
    static EnvelopeSet build(const MeteoSeries& history, const GeoLocation& site,
                             const ArrayOrientation& plane);

    const DailyEnvelope* find(int month, SkyCategory cat) const;
    // nearest available category in the same month (by class-center distance);
    // nullptr when the whole month is absent. `used` reports the chosen class.
    const DailyEnvelope* find_nearest(int month, SkyCategory cat, SkyCategory* used) const;

    // temperature pool of a bucket, sorted by irradiance; empty when absent
    const std::vector<WeatherSample>& pool(int month, SkyCategory cat) const;

    std::vector<std::pair<int, SkyCategory>> keys() const;

private:
    std::map<std::pair<int, int>, DailyEnvelope> envelopes_;
    std::map<std::pair<int, int>, std::vector<WeatherSample>> pools_;
    static const std::vector<WeatherSample> kEmptyPool;
};

}  // namespace pvtwin
