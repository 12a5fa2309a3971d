#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvtwin/losses.hpp"
#include "pvtwin/plant.hpp"
#include "pvtwin/timeutil.hpp"

namespace pvtwin {

struct SimulateOptions {
    Date start{2021, 1, 1};
    Date end{2021, 2, 28};  // inclusive
};

struct SynthStageOptions {
    int month = 1;
    int category = 3;  // 1..5
    int n_days = 90;
    int start_year = 2022;
};

struct InjectOptions {
    double max_fraction = 0.5;  // upper bound of the per-day faulty-sample share
};

struct TrainOptions {
    std::vector<std::string> targets{"i_l", "i_sc", "v_oc", "eta_cell", "eta_inv"};
    std::map<std::string, int> hidden_width{
        {"i_l", 12}, {"i_sc", 6}, {"v_oc", 12}, {"eta_cell", 15}, {"eta_inv", 15}};
    int epochs = 50;
    int batch_size = 5000;
    int folds = 5;
};

struct DetectOptions {
    std::string strategy = "quartile_iqr";
    std::size_t min_group_samples = 10;
};

// A fully resolved run configuration: equipment files referenced by the JSON
// document are loaded eagerly so downstream stages never touch the filesystem
// for parameters.
struct RunConfig {
    GeoLocation site;
    std::vector<SystemConfig> systems;
    SimulateOptions simulate;
    LossOptions losses;
    SynthStageOptions synth;
    InjectOptions inject;
    TrainOptions train;
    DetectOptions detect;
    std::uint64_t seed = 1;
    std::string source_path;  // where the document was loaded from ("" = built-in)
};

// Loads a module parameter file (single-diode reference values plus thermal
// and geometric data). Throws std::runtime_error with the offending path and
// field on malformed input.
ModuleParams load_module_file(const std::string& path);
ModuleParams parse_module_json(const std::string& text, const std::string& origin);

InverterParams load_inverter_file(const std::string& path);
InverterParams parse_inverter_json(const std::string& text, const std::string& origin);

// Loads a run configuration; `module_file`/`inverter_file` entries are resolved
// relative to the configuration file's directory.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config_json(const std::string& text, const std::string& origin,
                                const std::string& base_dir);

}  // namespace pvtwin
