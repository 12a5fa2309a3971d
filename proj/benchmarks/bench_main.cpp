// Microbenchmarks for the numerical hot paths: the per-sample simulation
// kernel (diode solve + inverter), the soiling statistics, the network
// training step, and band classification.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvtwin/detect.hpp"
#include "pvtwin/inverter.hpp"
#include "pvtwin/neural.hpp"
#include "pvtwin/rng.hpp"
#include "pvtwin/singlediode.hpp"
#include "pvtwin/soiling.hpp"
#include "support/fixtures.hpp"

using namespace pvtwin;

namespace {

void bm_diode_solve(benchmark::State& state) {
    const ModuleParams mod = testfix::reference_module();
    RngStream rng(1);
    std::vector<OperatingConditions> conds(256);
    for (auto& cd : conds) cd = {rng.uniform(50.0, 1100.0), rng.uniform(0.0, 70.0)};
    std::size_t i = 0;
    for (auto _ : state) {
        const DiodeParams p = translate_params(mod, conds[i++ & 255]);
        benchmark::DoNotOptimize(solve_single_diode(p));
    }
}
BENCHMARK(bm_diode_solve);

void bm_inverter(benchmark::State& state) {
    const InverterParams inv = testfix::reference_inverter();
    RngStream rng(2);
    std::vector<double> p_dc(256), v_dc(256);
    for (int k = 0; k < 256; ++k) {
        p_dc[static_cast<std::size_t>(k)] = rng.uniform(0.0, 60000.0);
        v_dc[static_cast<std::size_t>(k)] = rng.uniform(500.0, 700.0);
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const std::size_t k = i++ & 255;
        benchmark::DoNotOptimize(snl_ac_power(inv, p_dc[k], v_dc[k]));
    }
}
BENCHMARK(bm_inverter);

void bm_theil_sen(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    RngStream rng(3);
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = static_cast<double>(k);
        y[k] = -0.003 * static_cast<double>(k) + rng.normal(0.0, 0.01);
    }
    for (auto _ : state) benchmark::DoNotOptimize(theil_sen(x, y));
}
BENCHMARK(bm_theil_sen)->Arg(30)->Arg(90)->Arg(180);

void bm_rolling_median(benchmark::State& state) {
    RngStream rng(4);
    std::vector<double> v(365);
    for (double& e : v) e = rng.uniform(0.5, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(rolling_median(v, 14));
}
BENCHMARK(bm_rolling_median);

void bm_network_epoch(benchmark::State& state) {
    NetworkConfig cfg;
    cfg.inputs = 10;
    cfg.hidden = 12;
    Network net(cfg);
    RngStream init(5);
    net.init_weights(init);

    RngStream data(6);
    const std::size_t rows = 5000;
    std::vector<std::vector<double>> x(rows, std::vector<double>(10));
    std::vector<double> y(rows);
    std::vector<std::size_t> batch(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        batch[r] = r;
        y[r] = data.uniform(0.0, 1.0);
        for (double& e : x[r]) e = data.uniform(0.0, 1.0);
    }
    RngStream drop(7);
    std::vector<double> grad;
    for (auto _ : state)
        benchmark::DoNotOptimize(net.loss_and_gradients(x, y, batch, true, drop, grad));
}
BENCHMARK(bm_network_epoch);

void bm_band_classify(benchmark::State& state) {
    RngStream rng(8);
    const std::size_t n = 20000;
    std::vector<double> values(n);
    std::vector<int> slots(n);
    std::vector<SkyCategory> cats(n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = rng.normal(100.0, 10.0);
        slots[k] = static_cast<int>(rng.uniform_index(288));
        cats[k] = static_cast<SkyCategory>(1 + rng.uniform_index(5));
    }
    BandTable table =
        BandTable::fit(values, slots, cats, ThresholdStrategy::QuartileIqr, 10);
    std::size_t i = 0;
    for (auto _ : state) {
        const std::size_t k = i++ % n;
        benchmark::DoNotOptimize(table.classify_normal(values[k], slots[k], cats[k]));
    }
}
BENCHMARK(bm_band_classify);

}  // namespace

BENCHMARK_MAIN();
