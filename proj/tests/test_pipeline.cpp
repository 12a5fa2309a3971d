#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "pvtwin/config.hpp"
#include "pvtwin/ingest.hpp"
#include "pvtwin/pipeline.hpp"
#include "pvtwin/sha256.hpp"
#include "pvtwin/timeutil.hpp"
#include "support/fixtures.hpp"

using namespace pvtwin;
namespace fs = std::filesystem;

namespace {

// A small but complete run: every stage exercises its real code path, sized
// so the whole chain finishes in a couple of seconds.
RunConfig tiny_run_config() {
    RunConfig cfg;
    cfg.site = testfix::reference_site();
    cfg.systems = {testfix::reference_system()};
    cfg.simulate.start = Date{2021, 1, 1};
    cfg.simulate.end = Date{2021, 1, 21};
    cfg.losses.soiling_mc_iterations = 60;
    cfg.synth.month = 1;
    cfg.synth.category = 3;
    cfg.synth.n_days = 4;
    cfg.synth.start_year = 2022;
    cfg.inject.max_fraction = 0.5;
    cfg.train.targets = {"v_oc"};
    cfg.train.hidden_width = {{"v_oc", 6}};
    cfg.train.epochs = 4;
    cfg.train.batch_size = 512;
    cfg.train.folds = 2;
    cfg.detect.strategy = "quartile_iqr";
    cfg.detect.min_group_samples = 8;
    cfg.seed = 7;
    return cfg;
}

void run_all_stages(const RunConfig& cfg, const std::string& root) {
    run_simulate_stage(cfg, root);
    run_losses_stage(cfg, root);
    run_synth_stage(cfg, root);
    run_inject_stage(cfg, root);
    run_train_stage(cfg, root);
    run_detect_stage(cfg, root);
    run_report_stage(cfg, root);
}

std::map<std::string, std::string> digest_tree(const std::string& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        bool ok = false;
        const std::string digest = sha256_file_hex(entry.path().string(), ok);
        REQUIRE(ok);
        out[fs::relative(entry.path(), root).generic_string()] = digest;
    }
    return out;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("weather generator is deterministic, on-cadence, and dark at night") {
    const GeoLocation site = testfix::reference_site();
    const ArrayOrientation plane = testfix::reference_plane();
    const ModuleParams mod = testfix::reference_module();
    const Date start{2021, 3, 1};
    const Date end{2021, 3, 5};

    const MeteoSeries a = generate_weather(site, plane, mod, start, end, 42);
    REQUIRE(a.size() == 5u * 288u);
    REQUIRE(a.ghi.size() == a.size());
    REQUIRE(a.g_poa.size() == a.size());
    REQUIRE(a.t_amb.size() == a.size());
    REQUIRE(a.t_cell.size() == a.size());

    CHECK(a.t.front().date == start);
    CHECK(a.t.front().minute_of_day == 0);
    CHECK(a.t.back().date == end);
    CHECK(a.t.back().minute_of_day == 24 * 60 - 5);
    for (std::size_t i = 1; i < a.size(); ++i) {
        const bool same_day = a.t[i].date == a.t[i - 1].date;
        if (same_day)
            CHECK(a.t[i].minute_of_day == a.t[i - 1].minute_of_day + 5);
        else
            CHECK(a.t[i].minute_of_day == 0);
    }

    double peak = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int minute = a.t[i].minute_of_day;
        if (minute < 4 * 60 || minute >= 20 * 60) {
            CHECK(a.g_poa[i] == 0.0);
            CHECK(a.ghi[i] == 0.0);
        }
        CHECK(a.g_poa[i] >= 0.0);
        // irradiance at or below the floor is stored as exactly zero
        if (a.g_poa[i] != 0.0) CHECK(a.g_poa[i] > kIrradianceFloorWm2);
        CHECK(a.t_cell[i] >= a.t_amb[i]);
        peak = std::max(peak, a.g_poa[i]);
    }
    CHECK(peak > 300.0);  // a tropical site sees real sun within five days

    const MeteoSeries b = generate_weather(site, plane, mod, start, end, 42);
    CHECK(b.g_poa == a.g_poa);
    CHECK(b.ghi == a.ghi);
    CHECK(b.t_amb == a.t_amb);
    CHECK(b.t_cell == a.t_cell);

    const MeteoSeries c = generate_weather(site, plane, mod, start, end, 43);
    CHECK(c.g_poa != a.g_poa);
}

TEST_CASE("production CSV round trip preserves every value bit for bit") {
    const ProductionSeries prod = testfix::production_days(2);
    const std::string dir = testfix::scratch_dir("pipeline_csv");
    const std::string path = dir + "/production.csv";
    write_production_csv(prod, path);

    IngestReport report;
    const ProductionSeries back = ingest_production_file(path, report);
    REQUIRE(report.ok);
    REQUIRE(back.size() == prod.size());
    CHECK(back.g_poa == prod.g_poa);
    CHECK(back.t_amb == prod.t_amb);
    CHECK(back.t_cell == prod.t_cell);
    CHECK(back.i_dc == prod.i_dc);
    CHECK(back.v_dc == prod.v_dc);
    CHECK(back.p_dc == prod.p_dc);
    CHECK(back.p_ac == prod.p_ac);
    CHECK(back.i_l == prod.i_l);
    CHECK(back.i_sc == prod.i_sc);
    CHECK(back.v_oc == prod.v_oc);
    CHECK(back.eta_cell == prod.eta_cell);
    CHECK(back.eta_inv == prod.eta_inv);
    CHECK(back.t.front() == prod.t.front());
    CHECK(back.t.back() == prod.t.back());
}

TEST_CASE("labeled dataset reader recovers the label column") {
    const std::string dir = testfix::scratch_dir("pipeline_labeled");
    const std::string path = dir + "/dataset.csv";
    {
        std::string text =
            "timestamp,g_poa,t_amb,t_cell,i_dc,v_dc,p_dc,p_ac,fault_HS,label\n"
            "2021-01-01T10:00:00,800,20,40,9,500,4500,4400,0,0\n"
            "2021-01-01T10:05:00,810,20,41,9,500,4500,4400,40,1\n"
            "2021-01-01T10:10:00,820,21,41,9,500,4500,4400,0,0\n";
        std::ofstream out(path, std::ios::binary);
        out << text;
    }
    const LabeledLoad load = read_labeled_csv(path);
    REQUIRE(load.data.size() == 3);
    REQUIRE(load.label.size() == 3);
    CHECK(load.label[0] == 0);
    CHECK(load.label[1] == 1);
    CHECK(load.label[2] == 0);
    CHECK(load.data.g_poa[2] == 820.0);

    // a plain production file has no label column and must be rejected
    const std::string plain = dir + "/plain.csv";
    write_production_csv(testfix::production_days(1), plain);
    CHECK_THROWS_WITH_AS(read_labeled_csv(plain),
                         doctest::Contains("no label column"), std::runtime_error);
}

TEST_CASE("feature extraction emits the canonical ten-column layout") {
    const ProductionSeries prod = testfix::production_days(3);
    const GeoLocation site = testfix::reference_site();
    const ArrayOrientation plane = testfix::reference_plane();
    const FeatureSet f = extract_features(prod, site, plane);

    const std::vector<std::string> want = {"g_poa",      "t_amb",   "t_cell", "hour_frac",
                                           "month_frac", "k_daily", "i_dc",   "v_dc",
                                           "p_dc",       "p_ac"};
    CHECK(f.names == want);
    REQUIRE(f.rows.size() == prod.size());
    REQUIRE(f.slots.size() == prod.size());
    REQUIRE(f.categories.size() == prod.size());
    REQUIRE(f.k_daily.size() == prod.size());
    for (std::size_t i = 0; i < f.rows.size(); ++i) {
        REQUIRE(f.rows[i].size() == want.size());
        CHECK(f.rows[i][0] == prod.g_poa[i]);
        CHECK(f.rows[i][3] == doctest::Approx(hour_of_day(prod.t[i]) / 24.0));
        CHECK(f.rows[i][4] == doctest::Approx(prod.t[i].date.month / 12.0));
        CHECK(f.rows[i][5] == f.k_daily[i]);
        CHECK(f.slots[i] == slot_of_day(prod.t[i]));
        CHECK(f.k_daily[i] >= 0.0);
        CHECK(f.k_daily[i] <= 1.0);
    }
    // every sample of one calendar day shares that day's clearness
    CHECK(f.k_daily[0] == f.k_daily[287]);
}

TEST_CASE("series columns resolve by name and reject unknown names") {
    const ProductionSeries prod = testfix::production_days(1);
    CHECK(&series_column(prod, "v_oc") == &prod.v_oc);
    CHECK(&series_column(prod, "eta_inv") == &prod.eta_inv);
    CHECK(&series_column(prod, "g_poa") == &prod.g_poa);
    CHECK_THROWS_AS(series_column(prod, "volts"), std::invalid_argument);
}

TEST_CASE("stages chain end to end and leave verifiable artifacts") {
    const RunConfig cfg = tiny_run_config();
    const std::string root = testfix::scratch_dir("pipeline_chain");
    run_all_stages(cfg, root);

    const std::vector<std::string> expected = {
        "simulate/manifest.json", "simulate/array_a/production.csv",
        "losses/manifest.json",   "losses/array_a/loss_profile.csv",
        "losses/array_a/soiling.json",
        "synth/manifest.json",    "synth/array_a/synthetic_meteo.csv",
        "synth/array_a/days.csv",
        "inject/manifest.json",   "inject/array_a/dataset.csv",
        "inject/array_a/baseline.csv", "inject/array_a/schedule.json",
        "train/manifest.json",    "train/array_a/v_oc/model.json",
        "train/array_a/v_oc/history.csv", "train/array_a/v_oc/cv_report.json",
        "detect/manifest.json",   "detect/array_a/bands.csv",
        "detect/array_a/report.json",
        "report/manifest.json",   "report/summary.json", "report/summary.txt"};
    for (const std::string& rel : expected) {
        CAPTURE(rel);
        CHECK(fs::exists(fs::path(root) / rel));
    }

    // each manifest's recorded output digests match the bytes on disk
    for (const std::string& stage :
         {"simulate", "losses", "synth", "inject", "train", "detect", "report"}) {
        std::ifstream in(fs::path(root) / stage / "manifest.json");
        REQUIRE(in.good());
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        // spot-check: every recorded sha256 string corresponds to a real file digest
        std::size_t pos = 0;
        int checked = 0;
        while ((pos = text.find("\"path\": \"", pos)) != std::string::npos) {
            pos += 9;
            const std::size_t end = text.find('"', pos);
            const std::string rel = text.substr(pos, end - pos);
            const std::size_t spos = text.find("\"sha256\": \"", end);
            REQUIRE(spos != std::string::npos);
            const std::size_t sstart = spos + 11;
            const std::string want = text.substr(sstart, 64);
            bool ok = false;
            const std::string got = sha256_file_hex((fs::path(root) / rel).string(), ok);
            CAPTURE(stage);
            CAPTURE(rel);
            REQUIRE(ok);
            CHECK(got == want);
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("missing upstream artifacts name the stage that produces them") {
    const RunConfig cfg = tiny_run_config();
    const std::string root = testfix::scratch_dir("pipeline_missing");
    CHECK_THROWS_WITH_AS(run_losses_stage(cfg, root),
                         doctest::Contains("run the simulate stage first"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(run_train_stage(cfg, root),
                         doctest::Contains("run the inject stage first"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(run_detect_stage(cfg, root),
                         doctest::Contains("run the inject stage first"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(run_report_stage(cfg, root),
                         doctest::Contains("run the simulate stage first"),
                         std::runtime_error);
}

TEST_CASE("two runs with one configuration produce byte-identical trees") {
    const RunConfig cfg = tiny_run_config();
    const std::string root_a = testfix::scratch_dir("pipeline_rerun_a");
    const std::string root_b = testfix::scratch_dir("pipeline_rerun_b");
    run_all_stages(cfg, root_a);
    run_all_stages(cfg, root_b);

    const auto tree_a = digest_tree(root_a);
    const auto tree_b = digest_tree(root_b);
    REQUIRE(tree_a.size() == tree_b.size());
    CHECK(tree_a.size() >= 20);
    for (const auto& [rel, digest] : tree_a) {
        CAPTURE(rel);
        REQUIRE(tree_b.count(rel) == 1);
        CHECK(tree_b.at(rel) == digest);
    }

    // a different seed changes the data artifacts
    RunConfig other = cfg;
    other.seed = 8;
    const std::string root_c = testfix::scratch_dir("pipeline_rerun_c");
    run_all_stages(other, root_c);
    const auto tree_c = digest_tree(root_c);
    CHECK(tree_c.at("simulate/array_a/production.csv") !=
          tree_a.at("simulate/array_a/production.csv"));
}

}  // TEST_SUITE
