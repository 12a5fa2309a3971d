#include <cmath>
#include <string>

#include "doctest.h"
#include "pvtwin/sky.hpp"
#include "support/fixtures.hpp"

using namespace pvtwin;

TEST_SUITE("sky") {

TEST_CASE("category boundaries are half-open upward") {
    CHECK(classify_sky(0.0) == SkyCategory::SC1);
    CHECK(classify_sky(0.2) == SkyCategory::SC1);
    CHECK(classify_sky(0.2001) == SkyCategory::SC2);
    CHECK(classify_sky(0.4) == SkyCategory::SC2);
    CHECK(classify_sky(0.4001) == SkyCategory::SC3);
    CHECK(classify_sky(0.6) == SkyCategory::SC3);
    CHECK(classify_sky(0.6001) == SkyCategory::SC4);
    CHECK(classify_sky(0.67) == SkyCategory::SC4);
    CHECK(classify_sky(0.6701) == SkyCategory::SC5);
    CHECK(classify_sky(1.0) == SkyCategory::SC5);
}

TEST_CASE("category names and centers") {
    CHECK(std::string(sky_category_name(SkyCategory::SC1)) == "SC1");
    CHECK(std::string(sky_category_name(SkyCategory::SC5)) == "SC5");
    // centers sit inside their own class
    for (const SkyCategory c : {SkyCategory::SC1, SkyCategory::SC2, SkyCategory::SC3,
                                SkyCategory::SC4, SkyCategory::SC5}) {
        CHECK(classify_sky(sky_category_center(c)) == c);
    }
}

TEST_CASE("point clearness index clamps") {
    CHECK(clearness_index(500.0, 1000.0) == doctest::Approx(0.5));
    CHECK(clearness_index(1200.0, 1000.0) == doctest::Approx(1.0));  // clamp high
    CHECK(clearness_index(-5.0, 1000.0) == doctest::Approx(0.0));    // clamp low
    CHECK(clearness_index(500.0, 0.0) == doctest::Approx(0.0));      // no clear-sky reference
}

TEST_CASE("daily clearness is the energy-ratio") {
    CHECK(daily_clearness({100.0, 200.0}, {200.0, 400.0}) == doctest::Approx(0.5));
    CHECK(daily_clearness({0.0, 0.0}, {200.0, 400.0}) == doctest::Approx(0.0));
    CHECK(daily_clearness({900.0}, {600.0}) == doctest::Approx(1.0));  // clamped
}

TEST_CASE("clear-sky day profile has dark nights and a bright middle") {
    const auto prof = clear_sky_day_profile({2021, 1, 15}, testfix::reference_site(),
                                            testfix::reference_plane());
    // local midnight-to-dawn and dusk-to-midnight slots are zero
    for (int s = 0; s < 5 * 12; ++s) CHECK(prof[static_cast<std::size_t>(s)] == 0.0);
    for (int s = 19 * 12; s < kSlotsPerDay; ++s)
        CHECK(prof[static_cast<std::size_t>(s)] == 0.0);
    CHECK(prof[150] > 900.0);  // 12:30 local
}

TEST_CASE("day classification covers every day with plausible k") {
    const MeteoSeries history = testfix::weather_days(20);
    const auto days = classify_days(history.t, history.g_poa, testfix::reference_site(),
                                    testfix::reference_plane());
    REQUIRE(days.size() == 20);
    Date prev{1900, 1, 1};
    for (const DayClassification& d : days) {
        CHECK(prev < d.date);
        prev = d.date;
        CHECK(d.k_daily >= 0.0);
        CHECK(d.k_daily <= 1.0);
        CHECK(classify_sky(d.k_daily) == d.category);
    }
}

TEST_CASE("envelope build keeps per-slot ordering and dark nights") {
    const MeteoSeries history = testfix::weather_days(40);
    const EnvelopeSet env = EnvelopeSet::build(history, testfix::reference_site(),
                                               testfix::reference_plane());
    const auto keys = env.keys();
    REQUIRE_FALSE(keys.empty());
    for (const auto& [month, cat] : keys) {
        CHECK((month == 1 || month == 2));
        const DailyEnvelope* e = env.find(month, cat);
        REQUIRE(e != nullptr);
        CHECK(e->day_count > 0);
        for (const SlotEnvelope& s : e->slots) {
            if (s.count == 0) continue;
            CHECK(s.min <= s.mean);
            CHECK(s.mean <= s.max);
            CHECK(s.min >= 0.0);
        }
        // deep night must be dark in every envelope
        CHECK(e->slots[0].max == 0.0);
        CHECK(e->slots[kSlotsPerDay - 1].max == 0.0);

        // the bucket's temperature pool is sorted by irradiance
        const auto& pool = env.pool(month, cat);
        CHECK_FALSE(pool.empty());
        for (std::size_t i = 1; i < pool.size(); ++i)
            CHECK(pool[i - 1].g_poa <= pool[i].g_poa);
    }
}

TEST_CASE("nearest-category fallback picks the closest populated class") {
    const MeteoSeries history = testfix::weather_days(40);
    const EnvelopeSet env = EnvelopeSet::build(history, testfix::reference_site(),
                                               testfix::reference_plane());
    // find a category missing from January, if any, and ask for it
    for (int cat = 1; cat <= 5; ++cat) {
        SkyCategory used;
        const DailyEnvelope* e = env.find_nearest(1, static_cast<SkyCategory>(cat), &used);
        REQUIRE(e != nullptr);  // January exists in the history
        if (env.find(1, static_cast<SkyCategory>(cat)) != nullptr) {
            CHECK(used == static_cast<SkyCategory>(cat));
        } else {
            CHECK(env.find(1, used) == e);
        }
    }
    // a month with no history at all yields nothing
    SkyCategory used;
    CHECK(env.find_nearest(7, SkyCategory::SC3, &used) == nullptr);
}

}  // TEST_SUITE
