#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pvtwin/timeutil.hpp"

namespace pvtwin {

// Irradiance at or below this level is treated as night / sensor noise and
// stored as exactly 0 everywhere in the pipeline.
inline constexpr double kIrradianceFloorWm2 = 1.5;

// Production hours used for daily energy and performance aggregation.
inline constexpr int kProductionStartMinute = 6 * 60;
inline constexpr int kProductionEndMinute = 18 * 60;  // exclusive

inline bool in_production_hours(const Timestamp& t) {
    return t.minute_of_day >= kProductionStartMinute && t.minute_of_day < kProductionEndMinute;
}

// Weather inputs on the plant's 5-minute cadence.
struct MeteoSeries {
    std::vector<Timestamp> t;
    std::vector<double> ghi;     // may stay empty; plane-of-array is the driver
    std::vector<double> g_poa;   // W/m2
    std::vector<double> t_amb;   // C
    std::vector<double> t_cell;  // C

    std::size_t size() const { return t.size(); }
};

// Simulated (or measured) operating point per timestamp, array level.
struct ProductionSeries {
    std::vector<Timestamp> t;
    std::vector<double> g_poa;
    std::vector<double> t_amb;
    std::vector<double> t_cell;
    std::vector<double> i_dc;      // array MPP current, A
    std::vector<double> v_dc;      // array MPP voltage, V
    std::vector<double> p_dc;      // W
    std::vector<double> p_ac;      // W
    std::vector<double> i_l;       // photocurrent scaled by parallel strings, A
    std::vector<double> i_sc;      // A
    std::vector<double> v_oc;      // V
    std::vector<double> eta_cell;  // P_DC / (G_POA * array area); 0 at night
    std::vector<double> eta_inv;   // P_AC / P_DC; 0 when the inverter is off

    std::size_t size() const { return t.size(); }
    void resize(std::size_t n);
};

inline void ProductionSeries::resize(std::size_t n) {
    t.resize(n);
    for (auto* col : {&g_poa, &t_amb, &t_cell, &i_dc, &v_dc, &p_dc, &p_ac,
                      &i_l, &i_sc, &v_oc, &eta_cell, &eta_inv})
        col->resize(n);
}

// Contiguous [begin, end) index ranges sharing one calendar date, in order.
inline std::vector<std::pair<std::size_t, std::size_t>> day_ranges(
    const std::vector<Timestamp>& t) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= t.size(); ++i) {
        if (i == t.size() || !(t[i].date == t[begin].date)) {
            out.emplace_back(begin, i);
            begin = i;
        }
    }
    return out;
}

}  // namespace pvtwin
