#pragma once

#include <string>

#include "pvtwin/inverter.hpp"
#include "pvtwin/series.hpp"
#include "pvtwin/singlediode.hpp"
#include "pvtwin/solar.hpp"

namespace pvtwin {

// A cable run characterized for resistive loss: R = rho * length / section.
struct WiringSpec {
    double rho_ohm_mm2_per_m = 0.0171;  // copper resistivity
    double length_m = 0.0;
    double cross_section_mm2 = 1.0;

    double resistance_ohm() const { return rho_ohm_mm2_per_m * length_m / cross_section_mm2; }
};

// One inverter block: module type, array wiring and the electrical context
// needed to turn weather into production signals.
struct SystemConfig {
    std::string name;
    ModuleParams module;
    InverterParams inverter;
    ArrayConfig array;
    ArrayOrientation orientation;
    WiringSpec dc_wiring;
    WiringSpec ac_wiring;
    double v_ac_nominal = 480.0;

    double array_area_m2() const { return module.area_m2 * array.module_count(); }
};

// Runs the diode and inverter models over a weather series. Slots at or
// below the irradiance floor produce all-zero electrical signals. The output
// is the ideal (loss-free) operating point at the maximum power point.
ProductionSeries simulate_production(const MeteoSeries& meteo, const SystemConfig& sys);

}  // namespace pvtwin
