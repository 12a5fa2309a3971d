#include "pvtwin/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvtwin/stats.hpp"

namespace pvtwin {

std::string threshold_strategy_name(ThresholdStrategy s) {
    switch (s) {
        case ThresholdStrategy::MeanSigma: return "mean3sigma";
        case ThresholdStrategy::QuartileIqr: return "quartile_iqr";
        case ThresholdStrategy::QuartileWide: return "quartile_wide";
        case ThresholdStrategy::MinMax: return "minmax";
    }
    return "unknown";
}

ThresholdStrategy parse_threshold_strategy(const std::string& name) {
    if (name == "mean3sigma") return ThresholdStrategy::MeanSigma;
    if (name == "quartile_iqr") return ThresholdStrategy::QuartileIqr;
    if (name == "quartile_wide") return ThresholdStrategy::QuartileWide;
    if (name == "minmax") return ThresholdStrategy::MinMax;
    throw std::invalid_argument("unknown threshold strategy: " + name);
}

namespace {

ThresholdBand fit_band(const std::vector<double>& values, ThresholdStrategy strategy) {
    ThresholdBand band;
    band.count = values.size();
    if (values.empty()) {
        band.degenerate = true;
        return band;
    }
    switch (strategy) {
        case ThresholdStrategy::MeanSigma: {
            const double mu = mean(values);
            const double sd = stddev(values);
            band.low = mu - 3.0 * sd;
            band.high = mu + 3.0 * sd;
            break;
        }
        case ThresholdStrategy::QuartileIqr: {
            const Quartiles q = quartiles(values);
            band.low = q.q1 - 1.5 * q.iqr();
            band.high = q.q3 + 1.5 * q.iqr();
            break;
        }
        case ThresholdStrategy::QuartileWide: {
            const Quartiles q = quartiles(values);
            band.low = q.q3 - 1.5 * q.iqr();
            band.high = q.q3 + 1.5 * q.iqr();
            break;
        }
        case ThresholdStrategy::MinMax: {
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            band.low = *lo;
            band.high = *hi;
            break;
        }
    }
    if (band.high - band.low <= 0.0) {
        const double center = 0.5 * (band.low + band.high);
        const double eps = 1e-6 * std::max(std::abs(center), 1.0);
        band.low = center - eps;
        band.high = center + eps;
        band.degenerate = true;
    }
    return band;
}

}  // namespace

BandTable BandTable::fit(const std::vector<double>& values, const std::vector<int>& slots,
                         const std::vector<SkyCategory>& cats, ThresholdStrategy strategy,
                         std::size_t min_group_samples) {
    if (values.size() != slots.size() || values.size() != cats.size())
        throw std::invalid_argument("band fit: ragged inputs");
    if (values.empty()) throw std::invalid_argument("band fit: no healthy samples");

    BandTable table;
    table.strategy_ = strategy;

    std::map<std::pair<int, int>, std::vector<double>> by_slot_cat;
    std::map<int, std::vector<double>> by_slot;
    for (std::size_t i = 0; i < values.size(); ++i) {
        by_slot_cat[{slots[i], static_cast<int>(cats[i])}].push_back(values[i]);
        by_slot[slots[i]].push_back(values[i]);
    }
    for (const auto& [key, vals] : by_slot_cat)
        if (vals.size() >= min_group_samples) table.slot_cat_[key] = fit_band(vals, strategy);
    for (const auto& [slot, vals] : by_slot)
        if (vals.size() >= min_group_samples) table.slot_[slot] = fit_band(vals, strategy);
    table.global_ = fit_band(values, strategy);
    return table;
}

const ThresholdBand& BandTable::lookup(int slot, SkyCategory cat, BandLevel* level) const {
    if (const auto it = slot_cat_.find({slot, static_cast<int>(cat)}); it != slot_cat_.end()) {
        if (level) *level = BandLevel::SlotCategory;
        return it->second;
    }
    if (const auto it = slot_.find(slot); it != slot_.end()) {
        if (level) *level = BandLevel::SlotOnly;
        return it->second;
    }
    if (level) *level = BandLevel::Global;
    return global_;
}

bool BandTable::classify_normal(double value, int slot, SkyCategory cat, BandLevel* level) const {
    return lookup(slot, cat, level).contains(value);
}

double ConfusionMatrix::accuracy() const {
    const std::size_t n = total();
    return n > 0 ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0.0;
}

double ConfusionMatrix::precision() const {
    const std::size_t d = tp + fp;
    return d > 0 ? static_cast<double>(tp) / static_cast<double>(d) : 0.0;
}

double ConfusionMatrix::recall() const {
    const std::size_t d = tp + fn;
    return d > 0 ? static_cast<double>(tp) / static_cast<double>(d) : 0.0;
}

double ConfusionMatrix::specificity() const {
    const std::size_t d = tn + fp;
    return d > 0 ? static_cast<double>(tn) / static_cast<double>(d) : 0.0;
}

double ConfusionMatrix::f1() const {
    const double p = precision();
    const double r = recall();
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

DetectionReport run_detection(
    const std::map<std::string, std::vector<double>>& healthy_signals,
    const std::vector<int>& healthy_slots, const std::vector<SkyCategory>& healthy_cats,
    const std::map<std::string, std::vector<double>>& eval_signals,
    const std::vector<int>& eval_slots, const std::vector<SkyCategory>& eval_cats,
    const std::vector<std::uint8_t>& eval_labels, ThresholdStrategy strategy,
    std::size_t min_group_samples) {
    if (eval_slots.size() != eval_cats.size() || eval_slots.size() != eval_labels.size())
        throw std::invalid_argument("detection: ragged evaluation inputs");

    DetectionReport report;
    report.strategy = strategy;
    const std::size_t n = eval_slots.size();
    report.combined_flagged.assign(n, 0);

    for (const auto& [name, healthy_values] : healthy_signals) {
        const auto eval_it = eval_signals.find(name);
        if (eval_it == eval_signals.end())
            throw std::invalid_argument("detection: evaluation set lacks signal " + name);
        const std::vector<double>& eval_values = eval_it->second;
        if (eval_values.size() != n)
            throw std::invalid_argument("detection: ragged evaluation signal " + name);

        SignalDetection det;
        det.signal = name;
        det.bands = BandTable::fit(healthy_values, healthy_slots, healthy_cats, strategy,
                                   min_group_samples);
        const BandTable& table = det.bands;
        det.flagged.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            BandLevel level = BandLevel::Global;
            const bool normal = table.classify_normal(eval_values[i], eval_slots[i],
                                                      eval_cats[i], &level);
            if (level == BandLevel::SlotOnly) ++det.fallback_slot_only;
            if (level == BandLevel::Global) ++det.fallback_global;
            det.flagged[i] = normal ? 0 : 1;
            if (!normal) report.combined_flagged[i] = 1;
            if (eval_labels[i]) {
                normal ? ++det.confusion.fn : ++det.confusion.tp;
            } else {
                normal ? ++det.confusion.tn : ++det.confusion.fp;
            }
        }
        report.signals.push_back(std::move(det));
    }

    for (std::size_t i = 0; i < n; ++i) {
        const bool flagged = report.combined_flagged[i] != 0;
        if (eval_labels[i]) {
            flagged ? ++report.combined.tp : ++report.combined.fn;
        } else {
            flagged ? ++report.combined.fp : ++report.combined.tn;
        }
    }
    return report;
}

}  // namespace pvtwin
