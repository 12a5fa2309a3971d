#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvtwin/config.hpp"
#include "pvtwin/series.hpp"
#include "pvtwin/sky.hpp"

namespace pvtwin {

// Deterministic site weather on the 5-minute grid: per-day sky class drawn
// from an overcast-leaning mixture, clear-sky profile scaled by the day's
// clearness with autocorrelated intraday noise, diurnal ambient temperature
// and NOCT-model cell temperature. Identical (seed, site, plane, range)
// inputs reproduce the series byte for byte.
MeteoSeries generate_weather(const GeoLocation& site, const ArrayOrientation& plane,
                             const ModuleParams& module, const Date& start, const Date& end,
                             std::uint64_t seed);

// Canonical 13-column production CSV (timestamp, g_poa, t_amb, t_cell, i_dc,
// v_dc, p_dc, p_ac, i_l, i_sc, v_oc, eta_cell, eta_inv).
void write_production_csv(const ProductionSeries& s, const std::string& path);

// A labeled dataset read back from the inject stage's artifact.
struct LabeledLoad {
    ProductionSeries data;
    std::vector<std::uint8_t> label;
};
LabeledLoad read_labeled_csv(const std::string& path);

// Model inputs derived from a production series, one row per sample, in the
// canonical order: g_poa, t_amb, t_cell, hour_frac, month_frac, k_daily,
// i_dc, v_dc, p_dc, p_ac. Slot indices, per-sample day category and daily
// clearness ride along for grouping.
struct FeatureSet {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    std::vector<int> slots;
    std::vector<SkyCategory> categories;
    std::vector<double> k_daily;
};

FeatureSet extract_features(const ProductionSeries& s, const GeoLocation& site,
                            const ArrayOrientation& plane);

// Column of a production series by signal name (i_l, i_sc, v_oc, eta_cell,
// eta_inv, i_dc, v_dc, p_dc, p_ac, g_poa, t_amb, t_cell). Throws on unknown
// names.
const std::vector<double>& series_column(const ProductionSeries& s, const std::string& name);

// Stage drivers. Each writes its artifacts under `<out_root>/<stage>/` plus a
// manifest.json listing inputs and outputs with content digests, and returns
// the manifest path. A missing upstream artifact raises std::runtime_error
// naming the stage that should have produced it.
std::string run_simulate_stage(const RunConfig& cfg, const std::string& out_root);
std::string run_losses_stage(const RunConfig& cfg, const std::string& out_root);
std::string run_synth_stage(const RunConfig& cfg, const std::string& out_root);
std::string run_inject_stage(const RunConfig& cfg, const std::string& out_root);
std::string run_train_stage(const RunConfig& cfg, const std::string& out_root);
std::string run_detect_stage(const RunConfig& cfg, const std::string& out_root);
std::string run_report_stage(const RunConfig& cfg, const std::string& out_root);

}  // namespace pvtwin
