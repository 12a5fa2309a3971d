#include "pvtwin/soiling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvtwin/losses.hpp"
#include "pvtwin/rng.hpp"
#include "pvtwin/stats.hpp"

namespace pvtwin {

DailyPerformance daily_performance(const ProductionSeries& prod, double gamma_pmp) {
    DailyPerformance out;
    const double slot_hours = kSlotMinutes / 60.0;
    for (const auto& [begin, end] : day_ranges(prod.t)) {
        double energy = 0.0;
        double insolation = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            if (!in_production_hours(prod.t[i])) continue;
            energy += temperature_correct(prod.p_ac[i], prod.t_cell[i], gamma_pmp) * slot_hours;
            insolation += prod.g_poa[i] * slot_hours;
        }
        if (insolation <= 0.0) continue;  // no usable daytime data
        out.dates.push_back(prod.t[begin].date);
        out.energy_wh.push_back(energy);
        out.insolation_whm2.push_back(insolation);
        out.pm.push_back(energy / insolation);
    }
    if (!out.pm.empty()) {
        const double p95 = percentile(out.pm, 95.0);
        out.pm_norm.resize(out.pm.size());
        for (std::size_t i = 0; i < out.pm.size(); ++i)
            out.pm_norm[i] = p95 > 0.0 ? out.pm[i] / p95 : 0.0;
    }
    return out;
}

std::vector<double> rolling_median(const std::vector<double>& values, int window) {
    if (window < 1) throw std::invalid_argument("rolling_median: window must be >= 1");
    const std::size_t n = values.size();
    std::vector<double> out(n);
    const int half_lo = window / 2;
    const int half_hi = window - 1 - half_lo;
    std::vector<double> buf;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= static_cast<std::size_t>(half_lo) ? i - half_lo : 0;
        const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(half_hi));
        buf.assign(values.begin() + lo, values.begin() + hi + 1);
        out[i] = median(std::move(buf));
    }
    return out;
}

std::vector<std::size_t> detect_cleaning_events(const std::vector<double>& filtered) {
    if (filtered.size() < 15)
        throw std::invalid_argument("detect_cleaning_events: need at least 15 daily points");
    std::vector<double> deltas(filtered.size() - 1);
    std::vector<double> magnitudes(filtered.size() - 1);
    for (std::size_t i = 1; i < filtered.size(); ++i) {
        deltas[i - 1] = filtered[i] - filtered[i - 1];
        magnitudes[i - 1] = std::abs(deltas[i - 1]);
    }
    const Quartiles q = quartiles(magnitudes);
    const double fence = q.q3 + 1.5 * q.iqr();
    std::vector<std::size_t> events;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        // positive outliers only: a sudden recovery marks a cleaning
        if (magnitudes[i] > fence && deltas[i] > 0.0) events.push_back(i + 1);
    }
    return events;
}

TheilSenFit theil_sen(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("theil_sen: need n >= 2 matched points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("theil_sen: x must be strictly increasing");

    std::vector<double> slopes;
    slopes.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    std::sort(slopes.begin(), slopes.end());

    TheilSenFit fit;
    const std::size_t nslopes = slopes.size();
    fit.slope = nslopes % 2 ? slopes[nslopes / 2]
                            : 0.5 * (slopes[nslopes / 2 - 1] + slopes[nslopes / 2]);

    std::vector<double> intercepts(n);
    for (std::size_t i = 0; i < n; ++i) intercepts[i] = y[i] - fit.slope * x[i];
    fit.intercept = median(std::move(intercepts));

    // rank-based 95% bounds: Kendall variance of the score statistic
    const double nd = static_cast<double>(n);
    const double c_alpha = 1.96 * std::sqrt(nd * (nd - 1.0) * (2.0 * nd + 5.0) / 18.0);
    const double nt = static_cast<double>(nslopes);
    const auto clamp_idx = [&](double v) {
        return static_cast<std::size_t>(std::clamp(v, 0.0, nt - 1.0));
    };
    fit.ci_low = slopes[clamp_idx(std::floor((nt - c_alpha) / 2.0))];
    fit.ci_high = slopes[clamp_idx(std::ceil((nt + c_alpha) / 2.0))];
    return fit;
}

std::vector<SoilingInterval> segment_intervals(const std::vector<std::size_t>& events,
                                               std::size_t n, std::size_t min_days) {
    std::vector<SoilingInterval> out;
    std::size_t begin = 0;
    for (const std::size_t e : events) {
        if (e <= begin || e > n) continue;
        out.push_back(SoilingInterval{begin, e});
        begin = e;
    }
    if (begin < n) out.push_back(SoilingInterval{begin, n});

    // short intervals merge into their successor; a short tail merges backwards
    for (std::size_t i = 0; i + 1 < out.size();) {
        if (out[i].end - out[i].begin < min_days) {
            out[i + 1].begin = out[i].begin;
            out.erase(out.begin() + i);
        } else {
            ++i;
        }
    }
    if (out.size() >= 2 && out.back().end - out.back().begin < min_days) {
        out[out.size() - 2].end = out.back().end;
        out.pop_back();
    }
    return out;
}

double soiling_ratio_weighted(const std::vector<double>& pm_norm,
                              const std::vector<double>& insolation) {
    if (pm_norm.size() != insolation.size() || pm_norm.empty())
        throw std::invalid_argument("soiling_ratio_weighted: ragged or empty input");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pm_norm.size(); ++i) {
        num += insolation[i] * pm_norm[i];
        den += insolation[i];
    }
    if (den <= 0.0) throw std::invalid_argument("soiling_ratio_weighted: zero total insolation");
    return num / den;
}

std::vector<double> monte_carlo_soiling(const std::vector<SoilingInterval>& intervals,
                                        const std::vector<double>& x_days, int iterations,
                                        std::uint64_t seed) {
    const std::size_t n = x_days.size();
    std::vector<double> out(n, 1.0);
    if (intervals.empty() || n == 0 || iterations < 1) return out;

    std::vector<std::vector<double>> samples(n);
    for (auto& s : samples) s.reserve(iterations);
    for (int it = 0; it < iterations; ++it) {
        RngStream rng(derive_seed(seed, "soiling-mc", static_cast<std::uint64_t>(it)));
        for (const SoilingInterval& iv : intervals) {
            const double slope = rng.uniform(iv.fit.ci_low, iv.fit.ci_high);
            const double x0 = x_days[iv.begin];
            for (std::size_t i = iv.begin; i < iv.end; ++i)
                samples[i].push_back(iv.start_value + slope * (x_days[i] - x0));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!samples[i].empty()) out[i] = median(std::move(samples[i]));
    return out;
}

double soiling_loss_pct(double profile_value) {
    return 100.0 * (1.0 - std::clamp(profile_value, 0.0, 1.0));
}

SoilingResult analyze_soiling(const ProductionSeries& prod, double gamma_pmp,
                              const SoilingOptions& opt) {
    SoilingResult res;
    res.daily = daily_performance(prod, gamma_pmp);
    const std::size_t n = res.daily.size();
    if (n < 15) {
        res.profile.assign(n, 1.0);
        if (n > 0) res.r_s_weighted = 1.0;
        return res;  // ok stays false: not enough days for event detection
    }

    res.filtered = rolling_median(res.daily.pm_norm, opt.median_window);
    res.events = detect_cleaning_events(res.filtered);
    res.intervals = segment_intervals(res.events, n, opt.min_interval_days);

    // day offsets keep fits calendar-aware across gaps in the daily series
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = static_cast<double>(days_between(res.daily.dates.front(), res.daily.dates[i]));

    double prev_final = 0.0;
    for (std::size_t k = 0; k < res.intervals.size(); ++k) {
        SoilingInterval& iv = res.intervals[k];
        const std::vector<double> xi(x.begin() + iv.begin, x.begin() + iv.end);
        // slopes are fit on the raw normalized metric: the median filter is a
        // detection aid only, and its half-window would drag each interval's
        // edge values across the neighbouring cleaning step, biasing the
        // slope toward zero
        const std::vector<double> yi(res.daily.pm_norm.begin() + iv.begin,
                                     res.daily.pm_norm.begin() + iv.end);
        iv.fit = theil_sen(xi, yi);
        iv.start_value = iv.fit.intercept + iv.fit.slope * xi.front();
        const double final_value = iv.fit.intercept + iv.fit.slope * xi.back();
        iv.cleaning_step = k == 0 ? 0.0 : iv.start_value - prev_final;
        prev_final = final_value;

        const double span = xi.back() - xi.front() + 1.0;
        iv.gappy = static_cast<double>(iv.end - iv.begin) < 0.8 * span;
    }

    res.profile = monte_carlo_soiling(res.intervals, x, opt.mc_iterations, opt.seed);
    res.r_s_weighted = soiling_ratio_weighted(res.profile, res.daily.insolation_whm2);
    res.ok = true;
    return res;
}

}  // namespace pvtwin
