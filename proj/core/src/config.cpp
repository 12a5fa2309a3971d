#include "pvtwin/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pvtwin {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw std::runtime_error(origin + ": " + message);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json parse_document(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(origin, "invalid JSON");
    if (!j.is_object()) fail(origin, "top-level value must be an object");
    return j;
}

double require_number(const json& j, const std::string& key, const std::string& origin) {
    if (!j.contains(key)) fail(origin, "missing field '" + key + "'");
    if (!j.at(key).is_number()) fail(origin, "field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    return j.contains(key) && j.at(key).is_number() ? j.at(key).get<double>() : fallback;
}

int int_or(const json& j, const std::string& key, int fallback) {
    return j.contains(key) && j.at(key).is_number() ? j.at(key).get<int>() : fallback;
}

std::string require_string(const json& j, const std::string& key, const std::string& origin) {
    if (!j.contains(key) || !j.at(key).is_string())
        fail(origin, "missing or non-string field '" + key + "'");
    return j.at(key).get<std::string>();
}

Date require_date(const json& j, const std::string& key, const std::string& origin) {
    Date d{};
    if (!parse_date(require_string(j, key, origin), d))
        fail(origin, "field '" + key + "' is not a YYYY-MM-DD date");
    return d;
}

}  // namespace

ModuleParams parse_module_json(const std::string& text, const std::string& origin) {
    const json j = parse_document(text, origin);
    ModuleParams m;
    m.alpha_sc = require_number(j, "alpha_sc", origin);
    m.a_ref = require_number(j, "a_ref", origin);
    m.i_l_ref = require_number(j, "i_l_ref", origin);
    m.i_o_ref = require_number(j, "i_o_ref", origin);
    m.r_sh_ref = require_number(j, "r_sh_ref", origin);
    m.r_s = require_number(j, "r_s", origin);
    m.adjust_pct = require_number(j, "adjust_pct", origin);
    m.eg_ref_ev = number_or(j, "eg_ref_ev", 1.12);
    m.d_eg_dt = require_number(j, "d_eg_dt", origin);
    m.gamma_pmp = require_number(j, "gamma_pmp", origin);
    m.noct_c = number_or(j, "noct_c", 45.0);
    m.area_m2 = require_number(j, "area_m2", origin);
    m.nameplate_w = require_number(j, "nameplate_w", origin);
    if (m.a_ref <= 0.0 || m.i_l_ref <= 0.0 || m.i_o_ref <= 0.0 || m.r_sh_ref <= 0.0 ||
        m.r_s < 0.0 || m.area_m2 <= 0.0)
        fail(origin, "module parameters out of physical range");
    return m;
}

ModuleParams load_module_file(const std::string& path) {
    return parse_module_json(read_file(path), path);
}

InverterParams parse_inverter_json(const std::string& text, const std::string& origin) {
    const json j = parse_document(text, origin);
    InverterParams inv;
    inv.paco = require_number(j, "paco", origin);
    inv.pdco = require_number(j, "pdco", origin);
    inv.vdco = require_number(j, "vdco", origin);
    inv.pso = require_number(j, "pso", origin);
    inv.c0 = require_number(j, "c0", origin);
    inv.c1 = require_number(j, "c1", origin);
    inv.c2 = require_number(j, "c2", origin);
    inv.c3 = require_number(j, "c3", origin);
    if (inv.paco <= 0.0 || inv.pdco <= 0.0 || inv.pso < 0.0)
        fail(origin, "inverter parameters out of physical range");
    return inv;
}

InverterParams load_inverter_file(const std::string& path) {
    return parse_inverter_json(read_file(path), path);
}

namespace {

WiringSpec parse_wiring(const json& j, const std::string& origin) {
    WiringSpec w;
    w.length_m = require_number(j, "length_m", origin);
    w.cross_section_mm2 = number_or(j, "cross_section_mm2", 1.0);
    w.rho_ohm_mm2_per_m = number_or(j, "rho_ohm_mm2_per_m", 0.0171);
    if (w.length_m < 0.0 || w.cross_section_mm2 <= 0.0)
        fail(origin, "wiring parameters out of physical range");
    return w;
}

std::string resolve_relative(const std::string& base_dir, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

RunConfig parse_run_config_json(const std::string& text, const std::string& origin,
                                const std::string& base_dir) {
    const json j = parse_document(text, origin);
    RunConfig cfg;
    cfg.source_path = origin;

    if (!j.contains("site") || !j.at("site").is_object())
        fail(origin, "missing 'site' object");
    const json& site = j.at("site");
    cfg.site.latitude_deg = require_number(site, "latitude_deg", origin);
    cfg.site.longitude_deg = require_number(site, "longitude_deg", origin);
    cfg.site.altitude_m = number_or(site, "altitude_m", 0.0);
    cfg.site.utc_offset_hours = require_number(site, "utc_offset_hours", origin);

    if (!j.contains("systems") || !j.at("systems").is_array() || j.at("systems").empty())
        fail(origin, "missing or empty 'systems' array");
    for (const json& s : j.at("systems")) {
        SystemConfig sys;
        sys.name = require_string(s, "name", origin);
        sys.module = load_module_file(
            resolve_relative(base_dir, require_string(s, "module_file", origin)));
        sys.inverter = load_inverter_file(
            resolve_relative(base_dir, require_string(s, "inverter_file", origin)));
        sys.array.modules_per_string = int_or(s, "modules_per_string", 1);
        sys.array.strings = int_or(s, "strings", 1);
        if (sys.array.modules_per_string < 1 || sys.array.strings < 1)
            fail(origin, "system '" + sys.name + "': array layout must be positive");
        sys.orientation.tilt_deg = number_or(s, "tilt_deg", 0.0);
        sys.orientation.azimuth_deg = number_or(s, "azimuth_deg", 180.0);
        if (s.contains("dc_wiring")) sys.dc_wiring = parse_wiring(s.at("dc_wiring"), origin);
        if (s.contains("ac_wiring")) sys.ac_wiring = parse_wiring(s.at("ac_wiring"), origin);
        sys.v_ac_nominal = number_or(s, "v_ac_nominal", 480.0);
        cfg.systems.push_back(std::move(sys));
    }

    if (j.contains("simulate")) {
        const json& s = j.at("simulate");
        cfg.simulate.start = require_date(s, "start", origin);
        cfg.simulate.end = require_date(s, "end", origin);
        if (cfg.simulate.end < cfg.simulate.start)
            fail(origin, "simulate: end date precedes start date");
    }
    if (j.contains("losses")) {
        const json& s = j.at("losses");
        if (s.contains("degradation_start"))
            cfg.losses.degradation_start = require_date(s, "degradation_start", origin);
        cfg.losses.degradation_rate_pct_per_year =
            number_or(s, "degradation_rate_pct_per_year", cfg.losses.degradation_rate_pct_per_year);
        cfg.losses.soiling_median_window =
            int_or(s, "soiling_median_window", cfg.losses.soiling_median_window);
        cfg.losses.soiling_mc_iterations =
            int_or(s, "soiling_mc_iterations", cfg.losses.soiling_mc_iterations);
    }
    if (j.contains("synth")) {
        const json& s = j.at("synth");
        cfg.synth.month = int_or(s, "month", cfg.synth.month);
        cfg.synth.category = int_or(s, "category", cfg.synth.category);
        cfg.synth.n_days = int_or(s, "n_days", cfg.synth.n_days);
        cfg.synth.start_year = int_or(s, "start_year", cfg.synth.start_year);
        if (cfg.synth.month < 1 || cfg.synth.month > 12)
            fail(origin, "synth: month must be in 1..12");
        if (cfg.synth.category < 1 || cfg.synth.category > 5)
            fail(origin, "synth: category must be in 1..5");
        if (cfg.synth.n_days < 1) fail(origin, "synth: n_days must be positive");
    }
    if (j.contains("inject")) {
        cfg.inject.max_fraction = number_or(j.at("inject"), "max_fraction", 0.5);
        if (cfg.inject.max_fraction < 0.0 || cfg.inject.max_fraction > 1.0)
            fail(origin, "inject: max_fraction must be in [0, 1]");
    }
    if (j.contains("train")) {
        const json& s = j.at("train");
        if (s.contains("targets")) {
            if (!s.at("targets").is_array()) fail(origin, "train: 'targets' must be an array");
            cfg.train.targets.clear();
            for (const json& t : s.at("targets")) cfg.train.targets.push_back(t.get<std::string>());
        }
        if (s.contains("hidden_width")) {
            for (const auto& [key, value] : s.at("hidden_width").items())
                cfg.train.hidden_width[key] = value.get<int>();
        }
        cfg.train.epochs = int_or(s, "epochs", cfg.train.epochs);
        cfg.train.batch_size = int_or(s, "batch_size", cfg.train.batch_size);
        cfg.train.folds = int_or(s, "folds", cfg.train.folds);
    }
    if (j.contains("detect")) {
        const json& s = j.at("detect");
        if (s.contains("strategy")) cfg.detect.strategy = s.at("strategy").get<std::string>();
        cfg.detect.min_group_samples = static_cast<std::size_t>(
            int_or(s, "min_group_samples", static_cast<int>(cfg.detect.min_group_samples)));
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            fail(origin, "'seed' must be an integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    const std::string base_dir = std::filesystem::path(path).parent_path().string();
    return parse_run_config_json(read_file(path), path, base_dir);
}

}  // namespace pvtwin
