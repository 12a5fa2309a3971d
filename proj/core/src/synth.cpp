#include "pvtwin/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvtwin/rng.hpp"

namespace pvtwin {

double noct_cell_temp(double t_amb, double g_poa, double noct_c) {
    return t_amb + ((noct_c - 20.0) / 800.0) * g_poa;
}

std::array<double, kSlotsPerDay> synth_irradiance(const DailyEnvelope& env, RngStream& rng) {
    std::array<double, kSlotsPerDay> out{};
    for (int s = 0; s < kSlotsPerDay; ++s) {
        const SlotEnvelope& se = env.slots[s];
        if (se.count == 0 || se.max <= 0.0) continue;  // night or unseen slot
        const double sigma = (se.max - se.min) / 6.0;
        if (sigma <= 0.0) {
            out[s] = se.mean;
            continue;
        }
        // truncated Gaussian by rejection; the window is +-3 sigma around the
        // mean so acceptance is near certain, with a clamp as the backstop
        double g = se.mean;
        for (int tries = 0; tries < 100; ++tries) {
            g = rng.normal(se.mean, sigma);
            if (g >= se.min && g <= se.max) break;
        }
        out[s] = std::clamp(g, se.min, se.max);
    }
    return out;
}

SynthTemperature synth_temperature(double g, const std::vector<WeatherSample>& pool,
                                   double noct_c, RngStream& rng) {
    SynthTemperature out;
    // band matching on the pool (sorted by irradiance); +-2.5% of g, doubling
    // until it catches samples, capped at +-20%
    for (double band = 0.025; band <= 0.20 + 1e-12; band *= 2.0) {
        const double lo = g - band * g;
        const double hi = g + band * g;
        const auto first = std::lower_bound(
            pool.begin(), pool.end(), lo,
            [](const WeatherSample& s, double v) { return s.g_poa < v; });
        const auto last = std::upper_bound(
            pool.begin(), pool.end(), hi,
            [](double v, const WeatherSample& s) { return v < s.g_poa; });
        const std::ptrdiff_t n = last - first;
        if (n <= 0) continue;

        double ma = 0.0, mc = 0.0;
        for (auto it = first; it != last; ++it) {
            ma += it->t_amb;
            mc += it->t_cell;
        }
        ma /= static_cast<double>(n);
        mc /= static_cast<double>(n);
        double va = 0.0, vc = 0.0;
        for (auto it = first; it != last; ++it) {
            va += (it->t_amb - ma) * (it->t_amb - ma);
            vc += (it->t_cell - mc) * (it->t_cell - mc);
        }
        const double sa = n > 1 ? std::sqrt(va / static_cast<double>(n - 1)) : 0.0;
        const double sc = n > 1 ? std::sqrt(vc / static_cast<double>(n - 1)) : 0.0;

        // one shared standard draw keeps ambient and cell temperature coupled
        const double z = rng.normal();
        out.t_amb = ma + z * sa;
        out.t_cell = mc + z * sc;
        return out;
    }

    // no historical neighborhood at all: ambient falls back to the pool mean
    // (or a mild default when the pool itself is empty), cell to the NOCT model
    double ma = 20.0;
    if (!pool.empty()) {
        ma = 0.0;
        for (const WeatherSample& s : pool) ma += s.t_amb;
        ma /= static_cast<double>(pool.size());
    }
    out.t_amb = ma;
    out.t_cell = noct_cell_temp(ma, g, noct_c);
    out.noct_fallback = true;
    return out;
}

std::vector<SynthDay> generate_synthetic_days(const EnvelopeSet& envelopes,
                                              const SynthOptions& opt) {
    if (opt.month < 1 || opt.month > 12)
        throw std::invalid_argument("generate_synthetic_days: month out of range");
    if (opt.n_days < 1) throw std::invalid_argument("generate_synthetic_days: n_days < 1");

    SkyCategory used = opt.category;
    const DailyEnvelope* env = envelopes.find_nearest(opt.month, opt.category, &used);
    if (!env)
        throw std::invalid_argument("generate_synthetic_days: no historical data for month");
    const std::vector<WeatherSample>& pool = envelopes.pool(opt.month, used);

    std::vector<SynthDay> out;
    out.reserve(opt.n_days);
    int year = opt.start_year;
    int day = 1;
    for (int d = 0; d < opt.n_days; ++d) {
        if (day > days_in_month(year, opt.month)) {
            ++year;  // stay inside the envelope's month, roll the year instead
            day = 1;
        }
        SynthDay sd;
        sd.date = Date{year, opt.month, day};
        sd.category = opt.category;
        sd.envelope_category = used;

        RngStream rng(derive_seed(opt.seed, "synth-day", static_cast<std::uint64_t>(d)));
        sd.g_poa = synth_irradiance(*env, rng);
        for (int s = 0; s < kSlotsPerDay; ++s) {
            const SynthTemperature st = synth_temperature(sd.g_poa[s], pool, opt.noct_c, rng);
            sd.t_amb[s] = st.t_amb;
            sd.t_cell[s] = st.t_cell;
            sd.noct_fallback[s] = st.noct_fallback;
        }
        out.push_back(sd);
        ++day;
    }
    return out;
}

MeteoSeries to_meteo_series(const std::vector<SynthDay>& days) {
    MeteoSeries out;
    const std::size_t n = days.size() * kSlotsPerDay;
    out.t.reserve(n);
    out.g_poa.reserve(n);
    out.t_amb.reserve(n);
    out.t_cell.reserve(n);
    for (const SynthDay& d : days) {
        for (int s = 0; s < kSlotsPerDay; ++s) {
            out.t.push_back(Timestamp{d.date, s * kSlotMinutes});
            out.g_poa.push_back(d.g_poa[s]);
            out.t_amb.push_back(d.t_amb[s]);
            out.t_cell.push_back(d.t_cell[s]);
        }
    }
    return out;
}

}  // namespace pvtwin
