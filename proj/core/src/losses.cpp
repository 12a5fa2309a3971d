#include "pvtwin/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvtwin/soiling.hpp"

namespace pvtwin {

double temperature_correct(double p_ac, double t_cell, double gamma_pmp) {
    const double factor = 1.0 + gamma_pmp * (t_cell - 25.0);
    if (!(factor > 0.0))
        throw std::domain_error("temperature_correct: non-positive correction factor");
    return p_ac / factor;
}

double ohmic_loss(double current_a, const WiringSpec& wiring) {
    return current_a * current_a * wiring.resistance_ohm();
}

double inverter_loss(double p_dc, double p_ac) {
    if (p_dc <= 0.0) return 0.0;
    return std::clamp((1.0 - p_ac / p_dc) * 100.0, 0.0, 100.0);
}

double total_loss(const std::vector<double>& losses_pct) {
    // Multiply in sorted order so the result is bit-identical under any
    // permutation of the inputs (FP products are not associative).
    std::vector<double> factors(losses_pct.size());
    for (std::size_t i = 0; i < losses_pct.size(); ++i) factors[i] = 1.0 - losses_pct[i] / 100.0;
    std::sort(factors.begin(), factors.end());
    double transmitted = 1.0;
    for (const double f : factors) transmitted *= f;
    return 100.0 * (1.0 - transmitted);
}

double degradation_pct(const Date& start, const Date& day, double annual_rate_pct) {
    const double days = static_cast<double>(days_between(start, day));
    return annual_rate_pct * days / 365.0;
}

std::vector<double> degradation_profile(const Date& start, const std::vector<Date>& days,
                                        double annual_rate_pct) {
    std::vector<double> out(days.size());
    for (std::size_t i = 0; i < days.size(); ++i)
        out[i] = degradation_pct(start, days[i], annual_rate_pct);
    return out;
}

std::vector<DailyLosses> build_loss_profile(const ProductionSeries& prod,
                                            const SystemConfig& sys, const LossOptions& opt) {
    SoilingOptions sopt;
    sopt.median_window = opt.soiling_median_window;
    sopt.mc_iterations = opt.soiling_mc_iterations;
    sopt.seed = opt.soiling_seed;
    const SoilingResult soiling = analyze_soiling(prod, sys.module.gamma_pmp, sopt);

    // map soiling's daily series (which may drop days) back to dates
    std::vector<DailyLosses> out;
    for (const auto& [begin, end] : day_ranges(prod.t)) {
        DailyLosses day;
        day.date = prod.t[begin].date;
        day.degradation = degradation_pct(opt.degradation_start, day.date,
                                          opt.degradation_rate_pct_per_year);

        double e_dc = 0.0, e_ac = 0.0, e_dc_wire = 0.0, e_ac_wire = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            e_dc += prod.p_dc[i];
            e_ac += prod.p_ac[i];
            e_dc_wire += ohmic_loss(prod.i_dc[i], sys.dc_wiring);
            const double i_ac = sys.v_ac_nominal > 0.0 ? prod.p_ac[i] / sys.v_ac_nominal : 0.0;
            e_ac_wire += ohmic_loss(i_ac, sys.ac_wiring);
        }
        day.dc_wiring = e_dc > 0.0 ? std::min(100.0, 100.0 * e_dc_wire / e_dc) : 0.0;
        day.ac_wiring = e_ac > 0.0 ? std::min(100.0, 100.0 * e_ac_wire / e_ac) : 0.0;
        day.inverter = inverter_loss(e_dc, e_ac);

        day.soiling_flagged = !soiling.ok;
        for (std::size_t k = 0; k < soiling.daily.size(); ++k) {
            if (soiling.daily.dates[k] == day.date) {
                day.soiling = soiling.ok ? soiling_loss_pct(soiling.profile[k]) : 0.0;
                for (const SoilingInterval& iv : soiling.intervals)
                    if (k >= iv.begin && k < iv.end && iv.gappy) day.soiling_flagged = true;
                break;
            }
        }

        day.total = total_loss(
            {day.soiling, day.degradation, day.dc_wiring, day.ac_wiring, day.inverter});
        out.push_back(day);
    }
    return out;
}

}  // namespace pvtwin
