#include "pvtwin/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pvtwin/csv.hpp"
#include "pvtwin/detect.hpp"
#include "pvtwin/faults.hpp"
#include "pvtwin/ingest.hpp"
#include "pvtwin/losses.hpp"
#include "pvtwin/neural.hpp"
#include "pvtwin/plant.hpp"
#include "pvtwin/rng.hpp"
#include "pvtwin/sha256.hpp"
#include "pvtwin/soiling.hpp"
#include "pvtwin/synth.hpp"

namespace pvtwin {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// weather generation
// ---------------------------------------------------------------------------

MeteoSeries generate_weather(const GeoLocation& site, const ArrayOrientation& plane,
                             const ModuleParams& module, const Date& start, const Date& end,
                             std::uint64_t seed) {
    if (end < start) throw std::invalid_argument("generate_weather: end precedes start");
    MeteoSeries out;
    const std::int64_t n_days = days_between(start, end) + 1;
    out.t.reserve(static_cast<std::size_t>(n_days) * kSlotsPerDay);

    for (std::int64_t di = 0; di < n_days; ++di) {
        const Date date = add_days(start, di);
        RngStream rng(derive_seed(seed, "weather-day", static_cast<std::uint64_t>(di)));

        // overcast-leaning sky-class mixture, then the day's clearness level
        const double u = rng.uniform();
        double k_lo, k_hi;
        if (u < 0.12) {
            k_lo = 0.05;
            k_hi = 0.20;
        } else if (u < 0.34) {
            k_lo = 0.20;
            k_hi = 0.40;
        } else if (u < 0.64) {
            k_lo = 0.40;
            k_hi = 0.60;
        } else if (u < 0.80) {
            k_lo = 0.60;
            k_hi = 0.67;
        } else {
            k_lo = 0.67;
            k_hi = 0.95;
        }
        const double k_day = rng.uniform(k_lo, k_hi);
        const double noise_amp = 0.35 * (1.0 - 0.8 * k_day);

        double ar = 0.0;
        for (int slot = 0; slot < kSlotsPerDay; ++slot) {
            const Timestamp ts{date, slot * kSlotMinutes};
            const ClearSkyIrradiance cs = clear_sky_components(ts, site, plane);

            // both draws happen unconditionally so the stream stays aligned
            const double z = rng.normal();
            const double tz = rng.normal();
            ar = 0.85 * ar + noise_amp * z;
            const double shape = std::clamp(k_day * (1.0 + ar), 0.0, 1.05);

            double g = cs.poa * shape;
            double ghi = cs.ghi * shape;
            if (g <= kIrradianceFloorWm2) g = 0.0;
            if (ghi <= kIrradianceFloorWm2) ghi = 0.0;

            const double m = static_cast<double>(ts.minute_of_day);
            const double diurnal =
                std::max(0.0, std::sin(std::numbers::pi * (m - 390.0) / 840.0));
            const double t_amb = 12.5 + 7.5 * diurnal * (0.6 + 0.4 * k_day) + 0.4 * tz;
            const double t_cell = noct_cell_temp(t_amb, g, module.noct_c);

            out.t.push_back(ts);
            out.ghi.push_back(ghi);
            out.g_poa.push_back(g);
            out.t_amb.push_back(t_amb);
            out.t_cell.push_back(t_cell);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// artifact helpers
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kProductionHeader = {
    "timestamp", "g_poa", "t_amb", "t_cell", "i_dc",     "v_dc",   "p_dc",
    "p_ac",      "i_l",   "i_sc",  "v_oc",   "eta_cell", "eta_inv"};

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

void write_text(const std::string& path, const std::string& content) {
    ensure_parent_dir(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    for (const char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else
            out.push_back('_');
    }
    return out.empty() ? std::string("system") : out;
}

std::string config_digest(const RunConfig& cfg) {
    if (!cfg.source_path.empty()) {
        bool ok = false;
        const std::string digest = sha256_file_hex(cfg.source_path, ok);
        if (ok) return digest;
    }
    return sha256_hex("");
}

// Collects a stage's input/output records and renders the manifest. All paths
// are stored relative to the output root, so a rerun into any directory
// produces identical bytes.
class StageManifest {
  public:
    StageManifest(std::string stage, const RunConfig& cfg, std::string out_root)
        : stage_(std::move(stage)), out_root_(std::move(out_root)) {
        doc_["stage"] = stage_;
        doc_["seed"] = cfg.seed;
        doc_["config_sha256"] = config_digest(cfg);
        doc_["parameters"] = ordered_json::object();
        doc_["inputs"] = ordered_json::array();
        doc_["outputs"] = ordered_json::array();
        doc_["summary"] = ordered_json::object();
    }

    ordered_json& parameters() { return doc_["parameters"]; }
    ordered_json& summary() { return doc_["summary"]; }

    std::string abs_path(const std::string& rel) const {
        return (fs::path(out_root_) / rel).string();
    }

    // registers an upstream artifact; throws when it does not exist
    std::string require_input(const std::string& rel, const std::string& producer_stage) {
        const std::string full = abs_path(rel);
        if (!fs::exists(full))
            throw std::runtime_error(stage_ + ": missing input '" + rel + "' — run the " +
                                     producer_stage + " stage first");
        bool ok = false;
        const std::string digest = sha256_file_hex(full, ok);
        if (!ok) throw std::runtime_error(stage_ + ": cannot read input '" + rel + "'");
        doc_["inputs"].push_back({{"path", rel}, {"sha256", digest}});
        return full;
    }

    void write_output(const std::string& rel, const std::string& content) {
        const std::string full = abs_path(rel);
        write_text(full, content);
        doc_["outputs"].push_back({{"path", rel}, {"sha256", sha256_hex(content)}});
    }

    std::string finish() {
        const std::string rel = stage_ + "/manifest.json";
        const std::string full = abs_path(rel);
        write_text(full, doc_.dump(2) + "\n");
        return full;
    }

  private:
    std::string stage_;
    std::string out_root_;
    ordered_json doc_;
};

std::string production_csv_text(const ProductionSeries& s) {
    CsvWriter w(kProductionHeader);
    for (std::size_t i = 0; i < s.size(); ++i) {
        w.add_row();
        w.add(format_timestamp(s.t[i]));
        w.add(s.g_poa[i]);
        w.add(s.t_amb[i]);
        w.add(s.t_cell[i]);
        w.add(s.i_dc[i]);
        w.add(s.v_dc[i]);
        w.add(s.p_dc[i]);
        w.add(s.p_ac[i]);
        w.add(s.i_l[i]);
        w.add(s.i_sc[i]);
        w.add(s.v_oc[i]);
        w.add(s.eta_cell[i]);
        w.add(s.eta_inv[i]);
    }
    return w.str();
}

ProductionSeries load_production_artifact(const std::string& path, const std::string& stage) {
    IngestReport report;
    ProductionSeries prod = ingest_production_file(path, report);
    if (!report.ok) {
        std::string detail = report.errors.empty() ? "unreadable" : report.errors.front();
        throw std::runtime_error(stage + ": artifact '" + path + "' failed validation: " +
                                 detail);
    }
    return prod;
}

double series_energy_kwh(const ProductionSeries& s) {
    double wh = 0.0;
    for (const double p : s.p_ac) wh += p * (kSlotMinutes / 60.0);
    return wh / 1000.0;
}

}  // namespace

void write_production_csv(const ProductionSeries& s, const std::string& path) {
    write_text(path, production_csv_text(s));
}

LabeledLoad read_labeled_csv(const std::string& path) {
    LabeledLoad out;
    IngestReport report;
    out.data = ingest_production_file(path, report);
    if (!report.ok)
        throw std::runtime_error("labeled dataset '" + path + "' failed validation: " +
                                 (report.errors.empty() ? "unreadable" : report.errors.front()));

    CsvTable table;
    CsvError err;
    if (!read_csv_file(path, table, err))
        throw std::runtime_error("labeled dataset '" + path + "': " + err.message);
    if (table.rows.size() != out.data.size())
        throw std::runtime_error("labeled dataset '" + path +
                                 "': malformed rows are not allowed in labeled data");
    const int lc = table.column("label");
    if (lc < 0) throw std::runtime_error("labeled dataset '" + path + "': no label column");
    out.label.reserve(table.rows.size());
    for (const auto& row : table.rows)
        out.label.push_back(row[static_cast<std::size_t>(lc)] == "1" ? 1 : 0);
    return out;
}

FeatureSet extract_features(const ProductionSeries& s, const GeoLocation& site,
                            const ArrayOrientation& plane) {
    FeatureSet out;
    out.names = {"g_poa", "t_amb",   "t_cell", "hour_frac", "month_frac",
                 "k_daily", "i_dc", "v_dc",   "p_dc",      "p_ac"};
    out.rows.reserve(s.size());
    out.slots.reserve(s.size());
    out.categories.reserve(s.size());
    out.k_daily.reserve(s.size());

    const auto ranges = day_ranges(s.t);
    const auto days = classify_days(s.t, s.g_poa, site, plane);
    for (std::size_t d = 0; d < ranges.size(); ++d) {
        for (std::size_t i = ranges[d].first; i < ranges[d].second; ++i) {
            out.rows.push_back({s.g_poa[i], s.t_amb[i], s.t_cell[i],
                                hour_of_day(s.t[i]) / 24.0, s.t[i].date.month / 12.0,
                                days[d].k_daily, s.i_dc[i], s.v_dc[i], s.p_dc[i], s.p_ac[i]});
            out.slots.push_back(slot_of_day(s.t[i]));
            out.categories.push_back(days[d].category);
            out.k_daily.push_back(days[d].k_daily);
        }
    }
    return out;
}

const std::vector<double>& series_column(const ProductionSeries& s, const std::string& name) {
    static const std::map<std::string, std::vector<double> ProductionSeries::*> kColumns = {
        {"g_poa", &ProductionSeries::g_poa},   {"t_amb", &ProductionSeries::t_amb},
        {"t_cell", &ProductionSeries::t_cell}, {"i_dc", &ProductionSeries::i_dc},
        {"v_dc", &ProductionSeries::v_dc},     {"p_dc", &ProductionSeries::p_dc},
        {"p_ac", &ProductionSeries::p_ac},     {"i_l", &ProductionSeries::i_l},
        {"i_sc", &ProductionSeries::i_sc},     {"v_oc", &ProductionSeries::v_oc},
        {"eta_cell", &ProductionSeries::eta_cell}, {"eta_inv", &ProductionSeries::eta_inv}};
    const auto it = kColumns.find(name);
    if (it == kColumns.end()) throw std::invalid_argument("unknown signal column: " + name);
    return s.*(it->second);
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

std::string run_simulate_stage(const RunConfig& cfg, const std::string& out_root) {
    StageManifest manifest("simulate", cfg, out_root);
    manifest.parameters() = {{"start", format_date(cfg.simulate.start)},
                             {"end", format_date(cfg.simulate.end)}};

    ordered_json systems = ordered_json::array();
    for (std::size_t i = 0; i < cfg.systems.size(); ++i) {
        const SystemConfig& sys = cfg.systems[i];
        const MeteoSeries weather =
            generate_weather(cfg.site, sys.orientation, sys.module, cfg.simulate.start,
                             cfg.simulate.end, derive_seed(cfg.seed, "weather"));
        const ProductionSeries prod = simulate_production(weather, sys);

        const std::string rel = "simulate/" + sanitize_name(sys.name) + "/production.csv";
        manifest.write_output(rel, production_csv_text(prod));

        systems.push_back({{"name", sys.name},
                           {"rows", prod.size()},
                           {"days", day_ranges(prod.t).size()},
                           {"energy_kwh", series_energy_kwh(prod)}});
    }
    manifest.summary()["systems"] = systems;
    return manifest.finish();
}

// ---------------------------------------------------------------------------
// losses
// ---------------------------------------------------------------------------

namespace {

std::string loss_profile_csv_text(const std::vector<DailyLosses>& daily) {
    CsvWriter w({"date", "soiling_pct", "degradation_pct", "dc_wiring_pct", "ac_wiring_pct",
                 "inverter_pct", "total_pct", "soiling_flagged"});
    for (const DailyLosses& d : daily) {
        w.add_row();
        w.add(format_date(d.date));
        w.add(d.soiling);
        w.add(d.degradation);
        w.add(d.dc_wiring);
        w.add(d.ac_wiring);
        w.add(d.inverter);
        w.add(d.total);
        w.add(d.soiling_flagged ? 1 : 0);
    }
    return w.str();
}

std::vector<DailyLosses> read_loss_profile_csv(const std::string& path) {
    CsvTable table;
    CsvError err;
    if (!read_csv_file(path, table, err))
        throw std::runtime_error("loss profile '" + path + "': " + err.message);
    const std::vector<std::string> names = {"date",          "soiling_pct",  "degradation_pct",
                                            "dc_wiring_pct", "ac_wiring_pct", "inverter_pct",
                                            "total_pct",     "soiling_flagged"};
    std::vector<int> cols;
    for (const auto& n : names) {
        const int c = table.column(n);
        if (c < 0)
            throw std::runtime_error("loss profile '" + path + "': missing column " + n);
        cols.push_back(c);
    }
    std::vector<DailyLosses> out;
    for (const auto& row : table.rows) {
        DailyLosses d;
        if (!parse_date(row[static_cast<std::size_t>(cols[0])], d.date))
            throw std::runtime_error("loss profile '" + path + "': bad date");
        d.soiling = std::stod(row[static_cast<std::size_t>(cols[1])]);
        d.degradation = std::stod(row[static_cast<std::size_t>(cols[2])]);
        d.dc_wiring = std::stod(row[static_cast<std::size_t>(cols[3])]);
        d.ac_wiring = std::stod(row[static_cast<std::size_t>(cols[4])]);
        d.inverter = std::stod(row[static_cast<std::size_t>(cols[5])]);
        d.total = std::stod(row[static_cast<std::size_t>(cols[6])]);
        d.soiling_flagged = row[static_cast<std::size_t>(cols[7])] == "1";
        out.push_back(d);
    }
    return out;
}

ordered_json soiling_json(const SoilingResult& soil) {
    ordered_json j;
    j["ok"] = soil.ok;
    j["r_s_weighted"] = soil.r_s_weighted;
    j["events"] = ordered_json::array();
    for (const std::size_t e : soil.events)
        j["events"].push_back(format_date(soil.daily.dates[e]));
    j["intervals"] = ordered_json::array();
    for (const SoilingInterval& iv : soil.intervals) {
        j["intervals"].push_back(
            {{"start", format_date(soil.daily.dates[iv.begin])},
             {"end", format_date(soil.daily.dates[iv.end - 1])},
             {"slope_per_day", iv.fit.slope},
             {"slope_ci_low", iv.fit.ci_low},
             {"slope_ci_high", iv.fit.ci_high},
             {"start_value", iv.start_value},
             {"cleaning_step", iv.cleaning_step},
             {"gappy", iv.gappy}});
    }
    j["profile"] = ordered_json::array();
    for (std::size_t i = 0; i < soil.profile.size(); ++i)
        j["profile"].push_back(
            {{"date", format_date(soil.daily.dates[i])}, {"ratio", soil.profile[i]}});
    return j;
}

}  // namespace

std::string run_losses_stage(const RunConfig& cfg, const std::string& out_root) {
    StageManifest manifest("losses", cfg, out_root);
    LossOptions opt = cfg.losses;
    opt.soiling_seed = derive_seed(cfg.seed, "soiling");
    manifest.parameters() = {
        {"degradation_start", format_date(opt.degradation_start)},
        {"degradation_rate_pct_per_year", opt.degradation_rate_pct_per_year},
        {"soiling_median_window", opt.soiling_median_window},
        {"soiling_mc_iterations", opt.soiling_mc_iterations}};

    ordered_json systems = ordered_json::array();
    for (const SystemConfig& sys : cfg.systems) {
        const std::string dir = sanitize_name(sys.name);
        const std::string input =
            manifest.require_input("simulate/" + dir + "/production.csv", "simulate");
        const ProductionSeries prod = load_production_artifact(input, "losses");

        const std::vector<DailyLosses> daily = build_loss_profile(prod, sys, opt);
        SoilingOptions sopt;
        sopt.median_window = opt.soiling_median_window;
        sopt.mc_iterations = opt.soiling_mc_iterations;
        sopt.seed = opt.soiling_seed;
        const SoilingResult soil = analyze_soiling(prod, sys.module.gamma_pmp, sopt);

        manifest.write_output("losses/" + dir + "/loss_profile.csv",
                              loss_profile_csv_text(daily));
        manifest.write_output("losses/" + dir + "/soiling.json",
                              soiling_json(soil).dump(2) + "\n");

        double mean_total = 0.0;
        for (const DailyLosses& d : daily) mean_total += d.total;
        if (!daily.empty()) mean_total /= static_cast<double>(daily.size());
        systems.push_back({{"name", sys.name},
                           {"days", daily.size()},
                           {"mean_total_loss_pct", mean_total},
                           {"soiling_ratio_weighted", soil.r_s_weighted},
                           {"cleaning_events", soil.events.size()},
                           {"soiling_ok", soil.ok}});
    }
    manifest.summary()["systems"] = systems;
    return manifest.finish();
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

std::string run_synth_stage(const RunConfig& cfg, const std::string& out_root) {
    StageManifest manifest("synth", cfg, out_root);
    manifest.parameters() = {{"month", cfg.synth.month},
                             {"category", cfg.synth.category},
                             {"n_days", cfg.synth.n_days},
                             {"start_year", cfg.synth.start_year}};

    ordered_json systems = ordered_json::array();
    for (std::size_t i = 0; i < cfg.systems.size(); ++i) {
        const SystemConfig& sys = cfg.systems[i];
        const std::string dir = sanitize_name(sys.name);
        const std::string input =
            manifest.require_input("simulate/" + dir + "/production.csv", "simulate");
        const ProductionSeries prod = load_production_artifact(input, "synth");

        MeteoSeries history;
        history.t = prod.t;
        history.g_poa = prod.g_poa;
        history.t_amb = prod.t_amb;
        history.t_cell = prod.t_cell;
        const EnvelopeSet envelopes = EnvelopeSet::build(history, cfg.site, sys.orientation);

        SynthOptions opt;
        opt.month = cfg.synth.month;
        opt.category = static_cast<SkyCategory>(cfg.synth.category);
        opt.n_days = cfg.synth.n_days;
        opt.start_year = cfg.synth.start_year;
        opt.noct_c = sys.module.noct_c;
        opt.seed = derive_seed(cfg.seed, "synth", static_cast<std::uint64_t>(i));
        const std::vector<SynthDay> days = generate_synthetic_days(envelopes, opt);

        // flatten, then audit containment and self-consistency
        const MeteoSeries synthetic = to_meteo_series(days);
        CsvWriter w({"timestamp", "g_poa", "t_amb", "t_cell", "noct_fallback"});
        for (std::size_t d = 0; d < days.size(); ++d)
            for (int slot = 0; slot < kSlotsPerDay; ++slot) {
                w.add_row();
                w.add(format_timestamp(Timestamp{days[d].date, slot * kSlotMinutes}));
                w.add(days[d].g_poa[slot]);
                w.add(days[d].t_amb[slot]);
                w.add(days[d].t_cell[slot]);
                w.add(days[d].noct_fallback[slot] ? 1 : 0);
            }
        manifest.write_output("synth/" + dir + "/synthetic_meteo.csv", w.str());

        const DailyEnvelope* env = envelopes.find(cfg.synth.month, days.front().envelope_category);
        std::size_t contained = 0, total = 0, fallback_slots = 0;
        for (const SynthDay& d : days)
            for (int slot = 0; slot < kSlotsPerDay; ++slot) {
                if (env) {
                    const SlotEnvelope& se = env->slots[static_cast<std::size_t>(slot)];
                    const double g = d.g_poa[static_cast<std::size_t>(slot)];
                    const bool inside =
                        se.count == 0 ? g == 0.0
                                      : g >= se.min - 1e-9 && g <= se.max + 1e-9;
                    contained += inside ? 1 : 0;
                    ++total;
                }
                fallback_slots += d.noct_fallback[static_cast<std::size_t>(slot)] ? 1 : 0;
            }

        const auto classified = classify_days(synthetic.t, synthetic.g_poa, cfg.site,
                                              sys.orientation);
        std::size_t matching = 0;
        CsvWriter dw({"date", "requested_category", "envelope_category", "generated_k",
                      "generated_category"});
        for (std::size_t d = 0; d < days.size(); ++d) {
            dw.add_row();
            dw.add(format_date(days[d].date));
            dw.add(sky_category_name(days[d].category));
            dw.add(sky_category_name(days[d].envelope_category));
            dw.add(classified[d].k_daily);
            dw.add(sky_category_name(classified[d].category));
            if (classified[d].category == days[d].envelope_category) ++matching;
        }
        manifest.write_output("synth/" + dir + "/days.csv", dw.str());

        systems.push_back(
            {{"name", sys.name},
             {"days", days.size()},
             {"envelope_category", sky_category_name(days.front().envelope_category)},
             {"containment",
              total > 0 ? static_cast<double>(contained) / static_cast<double>(total) : 1.0},
             {"category_consistency",
              days.empty() ? 1.0
                           : static_cast<double>(matching) / static_cast<double>(days.size())},
             {"noct_fallback_share",
              days.empty() ? 0.0
                           : static_cast<double>(fallback_slots) /
                                 static_cast<double>(days.size() * kSlotsPerDay)}});
    }
    manifest.summary()["systems"] = systems;
    return manifest.finish();
}

// ---------------------------------------------------------------------------
// inject
// ---------------------------------------------------------------------------

namespace {

std::string labeled_csv_text(const LabeledSeries& labeled) {
    std::vector<std::string> header = kProductionHeader;
    header.push_back("label");
    header.insert(header.end(), {"loss_soiling_pct", "loss_degradation_pct",
                                 "loss_dc_wiring_pct", "loss_ac_wiring_pct", "loss_total_pct"});
    for (const auto& [name, _] : labeled.fault_columns) header.push_back(name);

    CsvWriter w(header);
    const ProductionSeries& s = labeled.data;
    for (std::size_t i = 0; i < s.size(); ++i) {
        w.add_row();
        w.add(format_timestamp(s.t[i]));
        w.add(s.g_poa[i]);
        w.add(s.t_amb[i]);
        w.add(s.t_cell[i]);
        w.add(s.i_dc[i]);
        w.add(s.v_dc[i]);
        w.add(s.p_dc[i]);
        w.add(s.p_ac[i]);
        w.add(s.i_l[i]);
        w.add(s.i_sc[i]);
        w.add(s.v_oc[i]);
        w.add(s.eta_cell[i]);
        w.add(s.eta_inv[i]);
        w.add(labeled.label[i]);
        w.add(labeled.loss_soiling[i]);
        w.add(labeled.loss_degradation[i]);
        w.add(labeled.loss_dc_wiring[i]);
        w.add(labeled.loss_ac_wiring[i]);
        w.add(labeled.loss_total[i]);
        for (const auto& [_, column] : labeled.fault_columns) w.add(column[i]);
    }
    return w.str();
}

ordered_json schedule_json(const FaultSchedule& schedule,
                           const std::vector<Timestamp>& t) {
    ordered_json entries = ordered_json::array();
    for (const ScheduledFault& f : schedule.entries) {
        ordered_json magnitudes = ordered_json::object();
        for (const auto& [signal, pct] : f.magnitudes)
            magnitudes[fault_signal_name(signal)] = pct;
        entries.push_back({{"index", f.index},
                           {"timestamp", format_timestamp(t[f.index])},
                           {"fault", f.fault},
                           {"independent", f.independent},
                           {"magnitudes_pct", magnitudes}});
    }
    ordered_json j;
    j["entries"] = entries;
    return j;
}

}  // namespace

std::string run_inject_stage(const RunConfig& cfg, const std::string& out_root) {
    StageManifest manifest("inject", cfg, out_root);
    manifest.parameters() = {{"max_fraction", cfg.inject.max_fraction}};

    ordered_json systems = ordered_json::array();
    for (std::size_t i = 0; i < cfg.systems.size(); ++i) {
        const SystemConfig& sys = cfg.systems[i];
        const std::string dir = sanitize_name(sys.name);
        const std::string prod_path =
            manifest.require_input("simulate/" + dir + "/production.csv", "simulate");
        const std::string loss_path =
            manifest.require_input("losses/" + dir + "/loss_profile.csv", "losses");

        const ProductionSeries prod = load_production_artifact(prod_path, "inject");
        const std::vector<DailyLosses> daily = read_loss_profile_csv(loss_path);

        const FaultSchedule schedule = generate_fault_schedule(
            prod.t, default_fault_specs(),
            derive_seed(cfg.seed, "inject", static_cast<std::uint64_t>(i)));
        const LabeledSeries labeled = apply_faults(prod, schedule, daily, sys);
        // derates without faults: the normal-operation baseline the detector
        // learns its thresholds from
        const LabeledSeries baseline = apply_faults(prod, FaultSchedule{}, daily, sys);

        manifest.write_output("inject/" + dir + "/dataset.csv", labeled_csv_text(labeled));
        manifest.write_output("inject/" + dir + "/baseline.csv",
                              production_csv_text(baseline.data));
        manifest.write_output("inject/" + dir + "/schedule.json",
                              schedule_json(schedule, prod.t).dump(2) + "\n");

        std::map<std::string, std::size_t> by_fault;
        for (const ScheduledFault& f : schedule.entries) ++by_fault[f.fault];
        ordered_json fault_counts = ordered_json::object();
        for (const auto& [name, count] : by_fault) fault_counts[name] = count;
        std::size_t labeled_count = 0;
        for (const int l : labeled.label) labeled_count += l != 0 ? 1 : 0;
        systems.push_back({{"name", sys.name},
                           {"rows", labeled.data.size()},
                           {"faulted_rows", labeled_count},
                           {"label_fraction",
                            labeled.data.size() > 0
                                ? static_cast<double>(labeled_count) /
                                      static_cast<double>(labeled.data.size())
                                : 0.0},
                           {"fault_counts", fault_counts}});
    }
    manifest.summary()["systems"] = systems;
    return manifest.finish();
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

namespace {

ordered_json metrics_json(const RegressionMetrics& m) {
    return {{"rmse", m.rmse},
            {"r2", m.r2},
            {"r2_defined", m.r2_defined},
            {"mape_pct", m.mape},
            {"meape_pct", m.meape},
            {"ape_excluded_zeros", m.ape_excluded_zeros},
            {"count", m.count}};
}

}  // namespace

std::string run_train_stage(const RunConfig& cfg, const std::string& out_root) {
    StageManifest manifest("train", cfg, out_root);
    manifest.parameters() = {{"targets", cfg.train.targets},
                             {"epochs", cfg.train.epochs},
                             {"batch_size", cfg.train.batch_size},
                             {"folds", cfg.train.folds}};

    ordered_json systems = ordered_json::array();
    for (std::size_t i = 0; i < cfg.systems.size(); ++i) {
        const SystemConfig& sys = cfg.systems[i];
        const std::string dir = sanitize_name(sys.name);
        const std::string dataset_path =
            manifest.require_input("inject/" + dir + "/dataset.csv", "inject");
        const LabeledLoad labeled = read_labeled_csv(dataset_path);
        const FeatureSet features = extract_features(labeled.data, cfg.site, sys.orientation);

        ordered_json target_summaries = ordered_json::object();
        for (std::size_t ti = 0; ti < cfg.train.targets.size(); ++ti) {
            const std::string& target = cfg.train.targets[ti];
            const std::vector<double>& y = series_column(labeled.data, target);

            NetworkConfig ncfg;
            ncfg.inputs = static_cast<int>(features.names.size());
            const auto width = cfg.train.hidden_width.find(target);
            ncfg.hidden = width != cfg.train.hidden_width.end() ? width->second : 12;
            ncfg.epochs = cfg.train.epochs;
            ncfg.batch_size = cfg.train.batch_size;

            const std::uint64_t seed =
                derive_seed(derive_seed(cfg.seed, "train", static_cast<std::uint64_t>(i)),
                            target, ti);
            const CvReport cv = kfold_cv(features.rows, y, ncfg, seed, cfg.train.folds);

            // final model on the full dataset
            MinMaxNormalizer xnorm, ynorm;
            xnorm.fit(features.rows);
            ynorm.fit_scalar(y);
            std::vector<std::vector<double>> xn;
            xn.reserve(features.rows.size());
            for (const auto& row : features.rows) xn.push_back(xnorm.transform(row));
            std::vector<double> yn;
            yn.reserve(y.size());
            for (const double v : y) yn.push_back(ynorm.transform_scalar(v));

            Network net(ncfg);
            RngStream init_rng(derive_seed(seed, "final-init"));
            net.init_weights(init_rng);
            const TrainReport report = train_network(net, xn, yn, derive_seed(seed, "final"));

            const std::string base = "train/" + dir + "/" + target + "/";
            manifest.write_output(base + "model.json", net.to_json(xnorm, ynorm));

            CsvWriter hw({"epoch", "train_loss", "val_loss", "learning_rate"});
            for (std::size_t e = 0; e < report.train_loss.size(); ++e) {
                hw.add_row();
                hw.add(static_cast<int>(e + 1));
                hw.add(report.train_loss[e]);
                hw.add(report.val_loss[e]);
                hw.add(report.lr_history[e]);
            }
            manifest.write_output(base + "history.csv", hw.str());

            ordered_json cv_json;
            cv_json["folds"] = ordered_json::array();
            for (const FoldResult& fr : cv.folds)
                cv_json["folds"].push_back(metrics_json(fr.test));
            cv_json["mean_test_r2"] = cv.mean_test_r2;
            cv_json["mean_test_rmse"] = cv.mean_test_rmse;
            cv_json["aborted_non_finite"] = report.aborted_non_finite;
            manifest.write_output(base + "cv_report.json", cv_json.dump(2) + "\n");

            target_summaries[target] = {{"mean_test_r2", cv.mean_test_r2},
                                        {"mean_test_rmse", cv.mean_test_rmse},
                                        {"final_val_loss", report.val_loss.empty()
                                                               ? 0.0
                                                               : report.val_loss.back()}};
        }
        systems.push_back({{"name", sys.name},
                           {"rows", labeled.data.size()},
                           {"targets", target_summaries}});
    }
    manifest.summary()["systems"] = systems;
    return manifest.finish();
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kMonitoredSignals = {"i_l",  "i_sc", "v_oc", "eta_cell",
                                                    "eta_inv", "i_dc", "v_dc", "p_dc", "p_ac"};

ordered_json confusion_json(const ConfusionMatrix& c) {
    return {{"tp", c.tp},
            {"tn", c.tn},
            {"fp", c.fp},
            {"fn", c.fn},
            {"accuracy", c.accuracy()},
            {"precision", c.precision()},
            {"recall", c.recall()},
            {"specificity", c.specificity()},
            {"f1", c.f1()}};
}

std::string bands_csv_text(const DetectionReport& report) {
    CsvWriter w({"signal", "level", "slot", "category", "low", "high", "count", "degenerate"});
    for (const SignalDetection& det : report.signals) {
        for (const auto& [key, band] : det.bands.slot_category_bands()) {
            w.add_row();
            w.add(det.signal);
            w.add(std::string("slot_category"));
            w.add(key.first);
            w.add(key.second);
            w.add(band.low);
            w.add(band.high);
            w.add(static_cast<long long>(band.count));
            w.add(band.degenerate ? 1 : 0);
        }
        for (const auto& [slot, band] : det.bands.slot_bands()) {
            w.add_row();
            w.add(det.signal);
            w.add(std::string("slot"));
            w.add(slot);
            w.add(0);
            w.add(band.low);
            w.add(band.high);
            w.add(static_cast<long long>(band.count));
            w.add(band.degenerate ? 1 : 0);
        }
        const ThresholdBand& g = det.bands.global_band();
        w.add_row();
        w.add(det.signal);
        w.add(std::string("global"));
        w.add(0);
        w.add(0);
        w.add(g.low);
        w.add(g.high);
        w.add(static_cast<long long>(g.count));
        w.add(g.degenerate ? 1 : 0);
    }
    return w.str();
}

}  // namespace

std::string run_detect_stage(const RunConfig& cfg, const std::string& out_root) {
    StageManifest manifest("detect", cfg, out_root);
    const ThresholdStrategy strategy = parse_threshold_strategy(cfg.detect.strategy);
    manifest.parameters() = {{"strategy", cfg.detect.strategy},
                             {"min_group_samples", cfg.detect.min_group_samples}};

    ordered_json systems = ordered_json::array();
    for (const SystemConfig& sys : cfg.systems) {
        const std::string dir = sanitize_name(sys.name);
        const std::string healthy_path =
            manifest.require_input("inject/" + dir + "/baseline.csv", "inject");
        const std::string eval_path =
            manifest.require_input("inject/" + dir + "/dataset.csv", "inject");

        const ProductionSeries healthy = load_production_artifact(healthy_path, "detect");
        const LabeledLoad eval = read_labeled_csv(eval_path);

        const FeatureSet hf = extract_features(healthy, cfg.site, sys.orientation);
        const FeatureSet ef = extract_features(eval.data, cfg.site, sys.orientation);

        // production hours only: the night rows carry no information and
        // would only pad the true-negative count
        std::vector<std::size_t> hsel, esel;
        for (std::size_t k = 0; k < healthy.size(); ++k)
            if (in_production_hours(healthy.t[k])) hsel.push_back(k);
        for (std::size_t k = 0; k < eval.data.size(); ++k)
            if (in_production_hours(eval.data.t[k])) esel.push_back(k);

        std::map<std::string, std::vector<double>> healthy_map, eval_map;
        for (const std::string& signal : kMonitoredSignals) {
            const std::vector<double>& hcol = series_column(healthy, signal);
            const std::vector<double>& ecol = series_column(eval.data, signal);
            std::vector<double>&h = healthy_map[signal], &e = eval_map[signal];
            h.reserve(hsel.size());
            e.reserve(esel.size());
            for (const std::size_t k : hsel) h.push_back(hcol[k]);
            for (const std::size_t k : esel) e.push_back(ecol[k]);
        }
        std::vector<int> hslots, eslots;
        std::vector<SkyCategory> hcats, ecats;
        std::vector<std::uint8_t> elabels;
        for (const std::size_t k : hsel) {
            hslots.push_back(hf.slots[k]);
            hcats.push_back(hf.categories[k]);
        }
        for (const std::size_t k : esel) {
            eslots.push_back(ef.slots[k]);
            ecats.push_back(ef.categories[k]);
            elabels.push_back(eval.label[k]);
        }

        const DetectionReport report =
            run_detection(healthy_map, hslots, hcats, eval_map, eslots, ecats, elabels,
                          strategy, cfg.detect.min_group_samples);

        manifest.write_output("detect/" + dir + "/bands.csv", bands_csv_text(report));

        ordered_json rj;
        rj["strategy"] = threshold_strategy_name(report.strategy);
        rj["samples_classified"] = esel.size();
        rj["samples_total"] = eval.data.size();
        rj["signals"] = ordered_json::object();
        for (const SignalDetection& det : report.signals) {
            ordered_json sj = confusion_json(det.confusion);
            sj["fallback_slot_only"] = det.fallback_slot_only;
            sj["fallback_global"] = det.fallback_global;
            rj["signals"][det.signal] = sj;
        }
        rj["combined"] = confusion_json(report.combined);
        manifest.write_output("detect/" + dir + "/report.json", rj.dump(2) + "\n");

        systems.push_back({{"name", sys.name},
                           {"combined_accuracy", report.combined.accuracy()},
                           {"combined_recall", report.combined.recall()},
                           {"combined_precision", report.combined.precision()},
                           {"samples_classified", esel.size()}});
    }
    manifest.summary()["systems"] = systems;
    return manifest.finish();
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

std::string run_report_stage(const RunConfig& cfg, const std::string& out_root) {
    StageManifest manifest("report", cfg, out_root);

    const std::vector<std::string> stages = {"simulate", "losses", "synth",
                                             "inject",   "train",  "detect"};
    ordered_json collected = ordered_json::object();
    for (const std::string& stage : stages) {
        const std::string path = manifest.require_input(stage + "/manifest.json", stage);
        ordered_json doc = ordered_json::parse(read_text(path), nullptr, false);
        if (doc.is_discarded())
            throw std::runtime_error("report: manifest of stage '" + stage + "' is not JSON");
        collected[stage] = doc.contains("summary") ? doc["summary"] : ordered_json::object();
    }

    ordered_json summary;
    summary["seed"] = cfg.seed;
    summary["config_sha256"] = config_digest(cfg);
    summary["stages"] = collected;
    manifest.write_output("report/summary.json", summary.dump(2) + "\n");

    // compact human-readable digest of the same numbers
    std::ostringstream txt;
    txt << "run summary (seed " << cfg.seed << ")\n";
    for (const std::string& stage : stages) {
        txt << "\n[" << stage << "]\n";
        const ordered_json& s = collected[stage];
        if (s.contains("systems")) {
            for (const auto& sys : s["systems"]) {
                txt << "  " << sys.value("name", std::string("?")) << ":";
                for (const auto& [key, value] : sys.items())
                    if (key != "name") txt << " " << key << "=" << value.dump();
                txt << "\n";
            }
        }
    }
    manifest.write_output("report/summary.txt", txt.str());

    manifest.summary()["stages_collected"] = stages.size();
    return manifest.finish();
}

}  // namespace pvtwin
