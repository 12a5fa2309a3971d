#pragma once

#include <cstdint>
#include <vector>

#include "pvtwin/series.hpp"
#include "pvtwin/timeutil.hpp"

namespace pvtwin {

// Daily performance metric series. PM = E / H where E is the daily
// temperature-corrected AC energy (Wh) and H the daily plane-of-array
// insolation (Wh/m2), both summed over production hours (06:00-18:00).
// pm_norm rescales PM by its 95th percentile so clean days sit near 1.
struct DailyPerformance {
    std::vector<Date> dates;
    std::vector<double> energy_wh;
    std::vector<double> insolation_whm2;
    std::vector<double> pm;
    std::vector<double> pm_norm;

    std::size_t size() const { return dates.size(); }
};

// Builds the daily metric from a 5-minute production series. Days whose
// insolation is zero (no valid daytime data) are dropped.
DailyPerformance daily_performance(const ProductionSeries& prod, double gamma_pmp);

// Centered moving median. An even window w covers [i - w/2, i + w/2 - 1];
// the window truncates at the series boundaries. Even-sized windows take the
// mean of the two middle order statistics.
std::vector<double> rolling_median(const std::vector<double>& values, int window);

// Cleaning-event days: indices i where the day-over-day change of the
// filtered metric is an upper outlier, |d_i| > Q3(|d|) + 1.5 IQR(|d|), and
// positive (performance recovered). Requires at least 15 points.
std::vector<std::size_t> detect_cleaning_events(const std::vector<double>& filtered);

struct TheilSenFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ci_low = 0.0;   // 95% confidence bounds on the slope
    double ci_high = 0.0;  // (rank-based, Kendall variance, z = 1.96)
};

// Median of all pairwise slopes; intercept = median(y - slope*x).
// x values must be strictly increasing.
TheilSenFit theil_sen(const std::vector<double>& x, const std::vector<double>& y);

// One deposition interval between cleaning events.
struct SoilingInterval {
    std::size_t begin = 0;  // index into the daily series, inclusive
    std::size_t end = 0;    // exclusive
    TheilSenFit fit;
    double start_value = 1.0;    // fit evaluated at the first day of the interval
    double cleaning_step = 0.0;  // start_value minus the previous interval's final fit value
    bool gappy = false;          // > 20% of the calendar span has no valid metric
};

// Splits [0, n) at the event indices; intervals shorter than min_days are
// merged into their successor (the trailing interval merges backwards).
std::vector<SoilingInterval> segment_intervals(const std::vector<std::size_t>& events,
                                               std::size_t n, std::size_t min_days = 5);

// insolation-weighted soiling ratio: sum(H_i * pm_i) / sum(H_i)
double soiling_ratio_weighted(const std::vector<double>& pm_norm,
                              const std::vector<double>& insolation);

struct SoilingResult {
    DailyPerformance daily;
    std::vector<double> filtered;          // rolling median of pm_norm
    std::vector<std::size_t> events;       // cleaning-event day indices
    std::vector<SoilingInterval> intervals;
    std::vector<double> profile;           // per-day median of the Monte Carlo profiles
    double r_s_weighted = 1.0;             // insolation-weighted ratio of `profile`
    bool ok = false;                       // false when the series is too short
};

struct SoilingOptions {
    int median_window = 14;
    int mc_iterations = 1000;
    std::uint64_t seed = 1;
    std::size_t min_interval_days = 5;
};

// Monte Carlo reconstruction: per iteration, each interval's slope is drawn
// uniformly from its confidence interval and the profile is rebuilt from the
// interval's start value. Returns the per-day median across iterations.
std::vector<double> monte_carlo_soiling(const std::vector<SoilingInterval>& intervals,
                                        const std::vector<double>& x_days, int iterations,
                                        std::uint64_t seed);

// The full chain: daily metric, median filter, event detection, per-interval
// fits, Monte Carlo profile and the weighted ratio.
SoilingResult analyze_soiling(const ProductionSeries& prod, double gamma_pmp,
                              const SoilingOptions& opt);

// daily soiling loss in percent from a reconstructed profile value
double soiling_loss_pct(double profile_value);

}  // namespace pvtwin
