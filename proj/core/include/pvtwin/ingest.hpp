#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pvtwin/series.hpp"
#include "pvtwin/timeutil.hpp"

namespace pvtwin {

// Outcome of validating one measurement CSV. `errors` carries line-numbered
// messages for every rejected row (capped) plus any fatal condition.
struct IngestReport {
    std::size_t total_rows = 0;        // data rows inspected
    std::size_t accepted_rows = 0;
    std::size_t dropped_rows = 0;      // malformed or incomplete rows
    std::size_t zeroed_irradiance = 0; // plane-of-array values at or below the floor
    std::vector<std::string> errors;
    bool ok = false;

    double drop_fraction() const {
        return total_rows > 0 ? static_cast<double>(dropped_rows) / static_cast<double>(total_rows)
                              : 0.0;
    }
};

inline constexpr std::size_t kIngestMaxReportedErrors = 50;
inline constexpr double kIngestMaxDropFraction = 0.10;

// Parses a production CSV into a series. Required columns: timestamp, g_poa,
// t_amb, t_cell, i_dc, v_dc, p_dc, p_ac. Optional: i_l, i_sc, v_oc, eta_cell,
// eta_inv (zero when absent). Rows with missing or non-numeric required fields
// are dropped and counted; irradiance at or below 1.5 W/m2 is zeroed; duplicate
// or out-of-order timestamps and a drop fraction above 10% fail the ingest.
ProductionSeries ingest_production_csv(const std::string& text, IngestReport& report);
ProductionSeries ingest_production_file(const std::string& path, IngestReport& report);

// Same validation rules for a bare meteorological file (timestamp, ghi, g_poa,
// t_amb, t_cell).
MeteoSeries ingest_meteo_csv(const std::string& text, IngestReport& report);
MeteoSeries ingest_meteo_file(const std::string& path, IngestReport& report);

// Daily AC-side energy recomputed from the power trace (trapezoid-free: each
// 5-minute sample contributes p_ac * 1/12 Wh). Energy columns in source files
// are never trusted.
std::vector<std::pair<Date, double>> daily_energy_wh(const std::vector<Timestamp>& t,
                                                     const std::vector<double>& p_ac);

// Daily plane-of-array insolation in Wh/m2 with the same integration rule.
std::vector<std::pair<Date, double>> daily_insolation_whm2(const std::vector<Timestamp>& t,
                                                           const std::vector<double>& g_poa);

}  // namespace pvtwin
