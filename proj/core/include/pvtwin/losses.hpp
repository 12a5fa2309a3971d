#pragma once

#include <vector>

#include "pvtwin/plant.hpp"
#include "pvtwin/series.hpp"
#include "pvtwin/timeutil.hpp"

namespace pvtwin {

// AC power referred back to reference cell temperature via the relative
// max-power coefficient: P / (1 + gamma_pmp * (T_cell - 25)).
// Throws std::domain_error when the correction factor is not positive.
double temperature_correct(double p_ac, double t_cell, double gamma_pmp);

// resistive loss in a cable run, W: I^2 * rho * L / A
double ohmic_loss(double current_a, const WiringSpec& wiring);

// conversion loss in percent, clamped to [0, 100]; 0 when p_dc <= 0
double inverter_loss(double p_dc, double p_ac);

// multiplicative composition of independent percent losses:
// 100 * (1 - prod_i(1 - l_i/100))
double total_loss(const std::vector<double>& losses_pct);

// linear degradation in percent since the commissioning date:
// annual_rate_pct * days / 365
double degradation_pct(const Date& start, const Date& day, double annual_rate_pct);
std::vector<double> degradation_profile(const Date& start, const std::vector<Date>& days,
                                        double annual_rate_pct);

// One row of the daily loss table, all in percent of produced energy.
struct DailyLosses {
    Date date;
    double soiling = 0.0;
    double degradation = 0.0;
    double dc_wiring = 0.0;
    double ac_wiring = 0.0;
    double inverter = 0.0;
    double total = 0.0;
    bool soiling_flagged = false;  // soiling value not trustworthy (see soiling.hpp)
};

struct LossOptions {
    Date degradation_start{2019, 8, 1};
    double degradation_rate_pct_per_year = 0.5;
    int soiling_median_window = 14;
    int soiling_mc_iterations = 1000;
    std::uint64_t soiling_seed = 1;
};

// Full daily decomposition for a production series: soiling via the
// performance-metric pipeline, linear degradation, energy-weighted wiring
// and inverter losses, and their multiplicative total.
std::vector<DailyLosses> build_loss_profile(const ProductionSeries& prod,
                                            const SystemConfig& sys, const LossOptions& opt);

}  // namespace pvtwin
