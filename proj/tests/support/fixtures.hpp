#pragma once

// Shared test fixtures: the reference equipment set, the reference site and
// small deterministic weather/production series. Values are duplicated from
// the bundled data files on purpose — the unit tests stay hermetic, and
// test_config.cpp separately checks that the data files still say the same.

#include <filesystem>
#include <string>

#include "pvtwin/pipeline.hpp"
#include "pvtwin/plant.hpp"

namespace testfix {

inline pvtwin::ModuleParams reference_module() {
    pvtwin::ModuleParams m;
    m.alpha_sc = 0.00314;
    m.a_ref = 1.82;
    m.i_l_ref = 10.48;
    m.i_o_ref = 1.8e-11;
    m.r_sh_ref = 293.8;
    m.r_s = 0.31;
    m.adjust_pct = 9.38;
    m.eg_ref_ev = 1.12;
    m.d_eg_dt = -0.000267;
    m.gamma_pmp = -0.0036;
    m.noct_c = 45.0;
    m.area_m2 = 2.073;
    m.nameplate_w = 400.0;
    return m;
}

inline pvtwin::InverterParams reference_inverter() {
    pvtwin::InverterParams inv;
    inv.paco = 50000.0;
    inv.pdco = 51056.7;
    inv.vdco = 610.0;
    inv.pso = 160.8;
    inv.c0 = -2.5e-7;
    inv.c1 = -1.5e-5;
    inv.c2 = 0.0014;
    inv.c3 = -0.00012;
    return inv;
}

// the plant site: Bogota, fixed UTC-5 local standard time
inline pvtwin::GeoLocation reference_site() {
    pvtwin::GeoLocation site;
    site.latitude_deg = 4.6024;
    site.longitude_deg = -74.0674;
    site.altitude_m = 2624.0;
    site.utc_offset_hours = -5.0;
    return site;
}

inline pvtwin::ArrayOrientation reference_plane() {
    return pvtwin::ArrayOrientation{10.0, 180.0};
}

inline pvtwin::SystemConfig reference_system() {
    pvtwin::SystemConfig sys;
    sys.name = "array_a";
    sys.module = reference_module();
    sys.inverter = reference_inverter();
    sys.array = pvtwin::ArrayConfig{16, 8};
    sys.orientation = reference_plane();
    sys.dc_wiring = pvtwin::WiringSpec{0.0171, 120.0, 10.0};
    sys.ac_wiring = pvtwin::WiringSpec{0.0171, 60.0, 16.0};
    sys.v_ac_nominal = 480.0;
    return sys;
}

// n_days of deterministic site weather starting 2021-01-01
inline pvtwin::MeteoSeries weather_days(int n_days, std::uint64_t seed = 11) {
    const pvtwin::Date start{2021, 1, 1};
    const pvtwin::Date end = pvtwin::add_days(start, n_days - 1);
    return pvtwin::generate_weather(reference_site(), reference_plane(), reference_module(),
                                    start, end, seed);
}

inline pvtwin::ProductionSeries production_days(int n_days, std::uint64_t seed = 11) {
    return pvtwin::simulate_production(weather_days(n_days, seed), reference_system());
}

// fresh per-test scratch directory under the build tree
inline std::string scratch_dir(const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(PVTWIN_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

inline std::string data_file(const std::string& name) {
    return (std::filesystem::path(PVTWIN_DATA_DIR) / name).string();
}

}  // namespace testfix
