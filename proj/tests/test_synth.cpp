#include <cmath>
#include <set>

#include "doctest.h"
#include "pvtwin/sky.hpp"
#include "pvtwin/synth.hpp"
#include "support/fixtures.hpp"

using namespace pvtwin;

namespace {

EnvelopeSet january_envelopes() {
    const MeteoSeries history = testfix::weather_days(59);  // all of Jan + Feb
    return EnvelopeSet::build(history, testfix::reference_site(), testfix::reference_plane());
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("NOCT cell temperature model") {
    CHECK(noct_cell_temp(20.0, 800.0, 45.0) == doctest::Approx(45.0));
    CHECK(noct_cell_temp(20.0, 0.0, 45.0) == doctest::Approx(20.0));
    CHECK(noct_cell_temp(10.0, 1000.0, 48.0) == doctest::Approx(10.0 + 28.0 / 800.0 * 1000.0));
}

TEST_CASE("irradiance draws stay inside the envelope") {
    const EnvelopeSet env = january_envelopes();
    SkyCategory used;
    const DailyEnvelope* e = env.find_nearest(1, SkyCategory::SC3, &used);
    REQUIRE(e != nullptr);

    RngStream rng(55);
    for (int rep = 0; rep < 5; ++rep) {
        const auto g = synth_irradiance(*e, rng);
        for (int s = 0; s < kSlotsPerDay; ++s) {
            const SlotEnvelope& slot = e->slots[static_cast<std::size_t>(s)];
            if (slot.count == 0 || slot.max <= 0.0) {
                CHECK(g[static_cast<std::size_t>(s)] == 0.0);
            } else {
                CHECK(g[static_cast<std::size_t>(s)] >= slot.min);
                CHECK(g[static_cast<std::size_t>(s)] <= slot.max);
            }
        }
    }
}

TEST_CASE("irradiance draws are seed deterministic") {
    const EnvelopeSet env = january_envelopes();
    SkyCategory used;
    const DailyEnvelope* e = env.find_nearest(1, SkyCategory::SC2, &used);
    REQUIRE(e != nullptr);
    RngStream a(9), b(9), c(10);
    CHECK(synth_irradiance(*e, a) == synth_irradiance(*e, b));
    RngStream a2(9);
    synth_irradiance(*e, a2);
    CHECK(synth_irradiance(*e, a2) != synth_irradiance(*e, c));
}

TEST_CASE("conditional temperature draw uses nearby historical samples") {
    std::vector<WeatherSample> pool;
    for (int i = 0; i < 40; ++i) {
        const double g = 100.0 + 20.0 * i;
        pool.push_back({g, 15.0 + 0.01 * g, 15.0 + 0.01 * g + 0.03125 * g});
    }
    RngStream rng(3);
    // plenty of samples within 2.5% of 500 W/m2 -> gaussian around their stats
    int fallbacks = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const SynthTemperature t = synth_temperature(500.0, pool, 45.0, rng);
        if (t.noct_fallback) ++fallbacks;
        CHECK(t.t_amb > 10.0);
        CHECK(t.t_amb < 30.0);
        CHECK(t.t_cell >= t.t_amb);
    }
    CHECK(fallbacks == 0);
}

TEST_CASE("empty or distant pools fall back to the NOCT model") {
    RngStream rng(4);
    const SynthTemperature empty = synth_temperature(500.0, {}, 45.0, rng);
    CHECK(empty.noct_fallback);
    CHECK(empty.t_cell == doctest::Approx(noct_cell_temp(empty.t_amb, 500.0, 45.0)));

    // all samples more than 20% away in irradiance: band doubling gives up
    std::vector<WeatherSample> far{{100.0, 20.0, 24.0}, {110.0, 21.0, 25.0}};
    const SynthTemperature t = synth_temperature(900.0, far, 45.0, rng);
    CHECK(t.noct_fallback);
}

TEST_CASE("generated days stay in the requested month and roll over years") {
    const EnvelopeSet env = january_envelopes();
    SynthOptions opt;
    opt.month = 1;
    opt.category = SkyCategory::SC3;
    opt.n_days = 70;
    opt.start_year = 2022;
    opt.seed = 12;
    const auto days = generate_synthetic_days(env, opt);
    REQUIRE(days.size() == 70);
    std::set<std::pair<int, int>> seen;  // (year, day)
    for (const SynthDay& d : days) {
        CHECK(d.date.month == 1);
        CHECK(seen.emplace(d.date.year, d.date.day).second);  // no duplicate dates
    }
    CHECK(days[0].date.year == 2022);
    CHECK(days[31].date.year == 2023);  // February does not exist in a January stream
    CHECK(days[62].date.year == 2024);
}

TEST_CASE("generation is byte-deterministic and seed sensitive") {
    const EnvelopeSet env = january_envelopes();
    SynthOptions opt;
    opt.n_days = 10;
    opt.seed = 77;
    const auto a = generate_synthetic_days(env, opt);
    const auto b = generate_synthetic_days(env, opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].g_poa == b[i].g_poa);
        CHECK(a[i].t_amb == b[i].t_amb);
        CHECK(a[i].t_cell == b[i].t_cell);
    }
    SynthOptions other = opt;
    other.seed = 78;
    const auto c = generate_synthetic_days(env, other);
    CHECK(a[0].g_poa != c[0].g_poa);
}

TEST_CASE("generated days contained in their envelope and mostly self-consistent") {
    const EnvelopeSet env = january_envelopes();
    const GeoLocation site = testfix::reference_site();
    const ArrayOrientation plane = testfix::reference_plane();

    SynthOptions opt;
    opt.n_days = 30;
    opt.category = SkyCategory::SC3;
    opt.seed = 31;
    const auto days = generate_synthetic_days(env, opt);

    int consistent = 0;
    for (const SynthDay& d : days) {
        const DailyEnvelope* e = env.find(1, d.envelope_category);
        REQUIRE(e != nullptr);
        for (int s = 0; s < kSlotsPerDay; ++s) {
            const SlotEnvelope& slot = e->slots[static_cast<std::size_t>(s)];
            const double g = d.g_poa[static_cast<std::size_t>(s)];
            if (slot.count == 0 || slot.max <= 0.0) {
                CHECK(g == 0.0);
            } else {
                CHECK(g >= slot.min);
                CHECK(g <= slot.max);
            }
        }
        // reclassify the generated irradiance against the clear-sky profile
        const auto clear = clear_sky_day_profile(d.date, site, plane);
        const double k = daily_clearness({d.g_poa.begin(), d.g_poa.end()},
                                         {clear.begin(), clear.end()});
        if (classify_sky(k) == d.envelope_category) ++consistent;
    }
    CHECK(consistent >= 27);  // >= 90%
}

TEST_CASE("flattening to a weather series keeps order and cadence") {
    const EnvelopeSet env = january_envelopes();
    SynthOptions opt;
    opt.n_days = 3;
    opt.seed = 2;
    const auto days = generate_synthetic_days(env, opt);
    const MeteoSeries m = to_meteo_series(days);
    REQUIRE(m.size() == 3u * kSlotsPerDay);
    for (std::size_t i = 1; i < m.size(); ++i) CHECK(m.t[i - 1] < m.t[i]);
    CHECK(m.t[0].minute_of_day == 0);
    CHECK(m.t[kSlotsPerDay].date == days[1].date);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::size_t day = i / kSlotsPerDay, slot = i % kSlotsPerDay;
        CHECK(m.g_poa[i] == days[day].g_poa[slot]);
        CHECK(m.t_cell[i] == days[day].t_cell[slot]);
    }
}

}  // TEST_SUITE
