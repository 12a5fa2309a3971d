// Command-line front end for the plant digital-twin pipeline. One subcommand
// per stage; every stage reads the run configuration, consumes the previous
// stage's artifacts from the output directory and writes its own plus a
// manifest. Failures print a single machine-readable JSON line to stderr.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pvtwin/config.hpp"
#include "pvtwin/pipeline.hpp"

namespace {

struct GlobalOptions {
    std::string config_path = "data/reference_config.json";
    std::string out_root = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int run_stage(const std::string& stage, const GlobalOptions& opt) {
    try {
        pvtwin::RunConfig cfg = pvtwin::load_run_config(opt.config_path);
        if (opt.seed_set) cfg.seed = opt.seed;

        std::string manifest;
        if (stage == "simulate")
            manifest = pvtwin::run_simulate_stage(cfg, opt.out_root);
        else if (stage == "losses")
            manifest = pvtwin::run_losses_stage(cfg, opt.out_root);
        else if (stage == "synth")
            manifest = pvtwin::run_synth_stage(cfg, opt.out_root);
        else if (stage == "inject")
            manifest = pvtwin::run_inject_stage(cfg, opt.out_root);
        else if (stage == "train")
            manifest = pvtwin::run_train_stage(cfg, opt.out_root);
        else if (stage == "detect")
            manifest = pvtwin::run_detect_stage(cfg, opt.out_root);
        else if (stage == "report")
            manifest = pvtwin::run_report_stage(cfg, opt.out_root);

        std::cout << manifest << "\n";
        return 0;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = {{"stage", stage}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photovoltaic plant digital twin: simulation, losses, synthetic weather, "
                 "fault injection, signal estimation and fault detection"};
    app.require_subcommand(1);

    GlobalOptions opt;
    app.add_option("--config", opt.config_path, "run configuration JSON")
        ->capture_default_str();
    app.add_option("--out", opt.out_root, "artifact output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", opt.seed, "override the configured seed");

    const struct {
        const char* name;
        const char* help;
    } stages[] = {
        {"simulate", "produce clean production series from generated site weather"},
        {"losses", "daily loss decomposition: soiling, degradation, wiring, inverter"},
        {"synth", "generate synthetic weather days for one month and sky class"},
        {"inject", "apply loss derates and labeled fault corruption to the clean series"},
        {"train", "fit the signal estimators with k-fold cross-validation"},
        {"detect", "fit per-slot thresholds on healthy data and classify the labeled set"},
        {"report", "collect every stage summary into one report"},
    };
    for (const auto& s : stages) app.add_subcommand(s.name, s.help);

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = seed_opt->count() > 0;

    return run_stage(app.get_subcommands().front()->get_name(), opt);
}
