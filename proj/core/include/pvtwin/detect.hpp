#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvtwin/sky.hpp"
#include "pvtwin/timeutil.hpp"

namespace pvtwin {

// How the normal-operation interval is derived from a group of healthy samples.
enum class ThresholdStrategy {
    MeanSigma,     // [mean - 3*sigma, mean + 3*sigma]
    QuartileIqr,   // [Q1 - 1.5*IQR, Q3 + 1.5*IQR]
    QuartileWide,  // [Q3 - 1.5*IQR, Q3 + 1.5*IQR] (narrow literal variant)
    MinMax,        // [min, max] of the healthy samples
};

std::string threshold_strategy_name(ThresholdStrategy s);
ThresholdStrategy parse_threshold_strategy(const std::string& name);

// Granularity actually used for one classified sample after fallbacks.
enum class BandLevel { SlotCategory, SlotOnly, Global };

struct ThresholdBand {
    double low = 0.0;
    double high = 0.0;
    std::size_t count = 0;  // healthy samples the band was fitted on
    bool degenerate = false;  // fitted on low-variance data; widened by epsilon

    bool contains(double v) const { return v >= low && v <= high; }
};

// One monitored signal's bands at every granularity, fitted on healthy history.
class BandTable {
  public:
    // `slots` are 5-minute slot indices, `cats` the sky category of each sample's day.
    static BandTable fit(const std::vector<double>& values, const std::vector<int>& slots,
                         const std::vector<SkyCategory>& cats, ThresholdStrategy strategy,
                         std::size_t min_group_samples = 10);

    // Band lookup with slot+category -> slot -> global fallback.
    const ThresholdBand& lookup(int slot, SkyCategory cat, BandLevel* level = nullptr) const;

    bool classify_normal(double value, int slot, SkyCategory cat,
                         BandLevel* level = nullptr) const;

    const std::map<std::pair<int, int>, ThresholdBand>& slot_category_bands() const {
        return slot_cat_;
    }
    const std::map<int, ThresholdBand>& slot_bands() const { return slot_; }
    const ThresholdBand& global_band() const { return global_; }
    ThresholdStrategy strategy() const { return strategy_; }

  private:
    std::map<std::pair<int, int>, ThresholdBand> slot_cat_;
    std::map<int, ThresholdBand> slot_;
    ThresholdBand global_;
    ThresholdStrategy strategy_ = ThresholdStrategy::QuartileIqr;
};

struct ConfusionMatrix {
    std::size_t tp = 0;  // faulty, flagged
    std::size_t tn = 0;  // healthy, not flagged
    std::size_t fp = 0;  // healthy, flagged
    std::size_t fn = 0;  // faulty, not flagged

    std::size_t total() const { return tp + tn + fp + fn; }
    double accuracy() const;
    double precision() const;
    double recall() const;
    double specificity() const;
    double f1() const;
};

struct SignalDetection {
    std::string signal;
    BandTable bands;                        // the fitted tables at every granularity
    ConfusionMatrix confusion;
    std::vector<std::uint8_t> flagged;      // per classified sample
    std::size_t fallback_slot_only = 0;     // samples classified without a category band
    std::size_t fallback_global = 0;        // samples classified on the global band
};

struct DetectionReport {
    ThresholdStrategy strategy = ThresholdStrategy::QuartileIqr;
    std::vector<SignalDetection> signals;
    ConfusionMatrix combined;                // sample is flagged if any signal flags it
    std::vector<std::uint8_t> combined_flagged;
};

// Fits one band table per monitored signal on healthy history and classifies the
// evaluation samples against them. `healthy_*` and `eval_*` are column maps keyed
// by signal name; every vector inside a set must share its set's length.
DetectionReport run_detection(
    const std::map<std::string, std::vector<double>>& healthy_signals,
    const std::vector<int>& healthy_slots, const std::vector<SkyCategory>& healthy_cats,
    const std::map<std::string, std::vector<double>>& eval_signals,
    const std::vector<int>& eval_slots, const std::vector<SkyCategory>& eval_cats,
    const std::vector<std::uint8_t>& eval_labels, ThresholdStrategy strategy,
    std::size_t min_group_samples = 10);

}  // namespace pvtwin
