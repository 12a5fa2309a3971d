#include "pvtwin/sky.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pvtwin {

const std::vector<WeatherSample> EnvelopeSet::kEmptyPool;

const char* sky_category_name(SkyCategory c) {
    switch (c) {
        case SkyCategory::SC1: return "SC1";
        case SkyCategory::SC2: return "SC2";
        case SkyCategory::SC3: return "SC3";
        case SkyCategory::SC4: return "SC4";
        case SkyCategory::SC5: return "SC5";
    }
    return "SC?";
}

double sky_category_center(SkyCategory c) {
    switch (c) {
        case SkyCategory::SC1: return 0.10;
        case SkyCategory::SC2: return 0.30;
        case SkyCategory::SC3: return 0.50;
        case SkyCategory::SC4: return 0.635;
        case SkyCategory::SC5: return 0.835;
    }
    return 0.5;
}

double clearness_index(double g_poa, double g_clear) {
    if (g_clear <= 0.0) return 0.0;
    return std::clamp(g_poa / g_clear, 0.0, 1.0);
}

SkyCategory classify_sky(double k) {
    // upper bounds are inclusive: k = 0.2 is still SC1
    if (k <= 0.2) return SkyCategory::SC1;
    if (k <= 0.4) return SkyCategory::SC2;
    if (k <= 0.6) return SkyCategory::SC3;
    if (k <= 0.67) return SkyCategory::SC4;
    return SkyCategory::SC5;
}

double daily_clearness(const std::vector<double>& g_poa, const std::vector<double>& g_clear) {
    if (g_poa.size() != g_clear.size())
        throw std::invalid_argument("daily_clearness: ragged inputs");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g_poa.size(); ++i) {
        num += g_poa[i];
        den += g_clear[i];
    }
    if (den <= 0.0) return 0.0;
    return std::clamp(num / den, 0.0, 1.0);
}

std::array<double, kSlotsPerDay> clear_sky_day_profile(const Date& date, const GeoLocation& site,
                                                       const ArrayOrientation& plane) {
    std::array<double, kSlotsPerDay> out{};
    for (int s = 0; s < kSlotsPerDay; ++s)
        out[s] = clear_sky_poa(Timestamp{date, s * kSlotMinutes}, site, plane);
    return out;
}

std::vector<DayClassification> classify_days(const std::vector<Timestamp>& t,
                                             const std::vector<double>& g_poa,
                                             const GeoLocation& site,
                                             const ArrayOrientation& plane) {
    if (t.size() != g_poa.size()) throw std::invalid_argument("classify_days: ragged inputs");
    std::vector<DayClassification> out;
    for (const auto& [begin, end] : day_ranges(t)) {
        DayClassification dc;
        dc.date = t[begin].date;
        double num = 0.0, den = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            num += g_poa[i];
            den += clear_sky_poa(t[i], site, plane);
        }
        dc.k_daily = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
        dc.category = classify_sky(dc.k_daily);
        out.push_back(dc);
    }
    return out;
}

EnvelopeSet EnvelopeSet::build(const MeteoSeries& history, const GeoLocation& site,
                               const ArrayOrientation& plane) {
    EnvelopeSet set;
    const auto days = day_ranges(history.t);
    const auto classes = classify_days(history.t, history.g_poa, site, plane);

    for (std::size_t d = 0; d < days.size(); ++d) {
        const auto [begin, end] = days[d];
        const auto key = std::make_pair(history.t[begin].date.month,
                                        static_cast<int>(classes[d].category));
        DailyEnvelope& env = set.envelopes_[key];
        auto& pool = set.pools_[key];
        ++env.day_count;
        for (std::size_t i = begin; i < end; ++i) {
            const int slot = slot_of_day(history.t[i]);
            SlotEnvelope& se = env.slots[slot];
            const double g = history.g_poa[i];
            if (se.count == 0) {
                se.min = se.max = g;
                se.mean = 0.0;
            } else {
                se.min = std::min(se.min, g);
                se.max = std::max(se.max, g);
            }
            se.mean += g;
            ++se.count;
            pool.push_back(WeatherSample{g, history.t_amb[i], history.t_cell[i]});
        }
    }
    for (auto& [key, env] : set.envelopes_)
        for (SlotEnvelope& se : env.slots)
            if (se.count > 0) se.mean /= se.count;
    for (auto& [key, pool] : set.pools_)
        std::sort(pool.begin(), pool.end(),
                  [](const WeatherSample& a, const WeatherSample& b) { return a.g_poa < b.g_poa; });
    return set;
}

const DailyEnvelope* EnvelopeSet::find(int month, SkyCategory cat) const {
    const auto it = envelopes_.find({month, static_cast<int>(cat)});
    return it == envelopes_.end() ? nullptr : &it->second;
}

const DailyEnvelope* EnvelopeSet::find_nearest(int month, SkyCategory cat,
                                               SkyCategory* used) const {
    if (const DailyEnvelope* exact = find(month, cat)) {
        if (used) *used = cat;
        return exact;
    }
    const double want = sky_category_center(cat);
    const DailyEnvelope* best = nullptr;
    double best_dist = 0.0;
    SkyCategory best_cat = cat;
    for (int c = 1; c <= 5; ++c) {
        const auto it = envelopes_.find({month, c});
        if (it == envelopes_.end()) continue;
        const double dist = std::abs(sky_category_center(static_cast<SkyCategory>(c)) - want);
        if (!best || dist < best_dist) {
            best = &it->second;
            best_dist = dist;
            best_cat = static_cast<SkyCategory>(c);
        }
    }
    if (used) *used = best_cat;
    return best;
}

const std::vector<WeatherSample>& EnvelopeSet::pool(int month, SkyCategory cat) const {
    const auto it = pools_.find({month, static_cast<int>(cat)});
    return it == pools_.end() ? kEmptyPool : it->second;
}

std::vector<std::pair<int, SkyCategory>> EnvelopeSet::keys() const {
    std::vector<std::pair<int, SkyCategory>> out;
    for (const auto& [key, env] : envelopes_)
        out.emplace_back(key.first, static_cast<SkyCategory>(key.second));
    return out;
}

}  // namespace pvtwin
