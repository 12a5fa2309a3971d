#include "pvtwin/faults.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "pvtwin/inverter.hpp"
#include "pvtwin/rng.hpp"

namespace pvtwin {

const char* fault_signal_name(FaultSignal s) {
    switch (s) {
        case FaultSignal::PDc: return "p_dc";
        case FaultSignal::IDc: return "i_dc";
        case FaultSignal::VDc: return "v_dc";
        case FaultSignal::PAc: return "p_ac";
        case FaultSignal::VOc: return "v_oc";
        case FaultSignal::ISc: return "i_sc";
        case FaultSignal::TCell: return "t_cell";
    }
    return "?";
}

std::vector<FaultSpec> default_fault_specs() {
    using S = FaultSignal;
    return {
        {"SS", {{S::PDc, 10.0, 20.0}}, false},
        {"HS", {{S::PDc, 10.0, 70.0}}, false},
        {"SOI", {{S::PDc, 8.0, 12.0}}, false},
        {"HSp", {{S::TCell, 2.0, 2.0}, {S::PDc, 2.0, 2.0}}, false},
        {"DEG", {{S::PDc, 0.0, 50.0}}, false},
        {"CC", {{S::TCell, 0.9, 42.8}, {S::PDc, 0.9, 42.8}}, false},
        {"LL", {{S::VOc, 20.0, 80.0}}, false},
        {"GF", {{S::ISc, 0.0, 51.9}, {S::PDc, 0.0, 51.9}}, false},
        {"SAF", {{S::IDc, 0.0, 62.5}, {S::VDc, 0.0, 80.0}}, true},
        {"PAF", {{S::VDc, 0.0, 87.5}}, false},
        {"IF", {{S::PAc, 0.0, 100.0}}, false},
    };
}

FaultSchedule generate_fault_schedule(const std::vector<Timestamp>& t,
                                      const std::vector<FaultSpec>& specs, std::uint64_t seed) {
    FaultSchedule out;
    if (specs.empty()) return out;

    const auto days = day_ranges(t);
    for (std::size_t d = 0; d < days.size(); ++d) {
        RngStream rng(derive_seed(seed, "fault-day", static_cast<std::uint64_t>(d)));
        const FaultSpec& spec = specs[rng.uniform_index(specs.size())];

        std::vector<std::size_t> eligible;
        for (std::size_t i = days[d].first; i < days[d].second; ++i)
            if (in_production_hours(t[i])) eligible.push_back(i);
        if (eligible.empty()) continue;

        const double fraction = rng.uniform(0.0, 0.5);
        const std::size_t count =
            static_cast<std::size_t>(fraction * static_cast<double>(eligible.size()));
        if (count == 0) continue;

        // partial Fisher-Yates: the first `count` entries are a uniform draw
        // without replacement
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + rng.uniform_index(eligible.size() - i);
            std::swap(eligible[i], eligible[j]);
        }
        eligible.resize(count);
        std::sort(eligible.begin(), eligible.end());

        for (const std::size_t idx : eligible) {
            ScheduledFault sf;
            sf.index = idx;
            sf.fault = spec.name;
            sf.independent = spec.independent_draws;
            if (spec.independent_draws) {
                for (const FaultEffect& e : spec.effects)
                    sf.magnitudes.emplace_back(e.signal, rng.uniform(e.min_pct, e.max_pct));
            } else {
                const double mag =
                    rng.uniform(spec.effects.front().min_pct, spec.effects.front().max_pct);
                for (const FaultEffect& e : spec.effects) sf.magnitudes.emplace_back(e.signal, mag);
            }
            out.entries.push_back(std::move(sf));
        }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const ScheduledFault& a, const ScheduledFault& b) { return a.index < b.index; });
    return out;
}

DailyLosses sample_daily_losses(const std::vector<DailyLosses>& archive, int month,
                                std::uint64_t seed) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < archive.size(); ++i)
        if (archive[i].date.month == month) candidates.push_back(i);
    if (candidates.empty())
        throw std::invalid_argument("sample_daily_losses: loss archive has no day in month " +
                                    std::to_string(month));
    RngStream rng(derive_seed(seed, "loss-sample", static_cast<std::uint64_t>(month)));
    return archive[candidates[rng.uniform_index(candidates.size())]];
}

namespace {

double* signal_column(ProductionSeries& s, FaultSignal sig) {
    switch (sig) {
        case FaultSignal::PDc: return s.p_dc.data();
        case FaultSignal::IDc: return s.i_dc.data();
        case FaultSignal::VDc: return s.v_dc.data();
        case FaultSignal::PAc: return s.p_ac.data();
        case FaultSignal::VOc: return s.v_oc.data();
        case FaultSignal::ISc: return s.i_sc.data();
        case FaultSignal::TCell: return s.t_cell.data();
    }
    return nullptr;
}

}  // namespace

LabeledSeries apply_faults(const ProductionSeries& clean, const FaultSchedule& schedule,
                           const std::vector<DailyLosses>& daily, const SystemConfig& sys) {
    const std::size_t n = clean.size();
    LabeledSeries out;
    out.data = clean;
    out.label.assign(n, 0);
    for (auto* col : {&out.loss_soiling, &out.loss_degradation, &out.loss_dc_wiring,
                      &out.loss_ac_wiring, &out.loss_total})
        col->assign(n, 0.0);

    std::map<Date, const DailyLosses*> by_date;
    for (const DailyLosses& dl : daily) by_date[dl.date] = &dl;

    // fault magnitude columns: one per fault, split per signal when a fault
    // draws independently per signal
    std::map<std::string, std::size_t> column_of;
    auto column = [&](const std::string& name) -> std::vector<double>& {
        const auto it = column_of.find(name);
        if (it != column_of.end()) return out.fault_columns[it->second].second;
        column_of.emplace(name, out.fault_columns.size());
        out.fault_columns.emplace_back(name, std::vector<double>(n, 0.0));
        return out.fault_columns.back().second;
    };

    // pass 1: panel-level daily derates (soiling + degradation) on DC signals
    for (const auto& [begin, end] : day_ranges(clean.t)) {
        const auto it = by_date.find(clean.t[begin].date);
        if (it == by_date.end())
            throw std::invalid_argument("apply_faults: loss table does not cover " +
                                        format_date(clean.t[begin].date));
        const DailyLosses& dl = *it->second;
        const double panel = (1.0 - dl.soiling / 100.0) * (1.0 - dl.degradation / 100.0);
        for (std::size_t i = begin; i < end; ++i) {
            out.data.p_dc[i] *= panel;
            out.data.i_dc[i] *= panel;
            out.data.i_l[i] *= panel;
            out.data.i_sc[i] *= panel;
            out.loss_soiling[i] = dl.soiling;
            out.loss_degradation[i] = dl.degradation;
            out.loss_dc_wiring[i] = dl.dc_wiring;
            out.loss_ac_wiring[i] = dl.ac_wiring;
            out.loss_total[i] = dl.total;
        }
    }

    // pass 2: DC-side fault corruption; the inverter-fault magnitudes are
    // recorded here but applied after the conversion stage
    for (const ScheduledFault& sf : schedule.entries) {
        if (sf.index >= n) throw std::invalid_argument("apply_faults: schedule index out of range");
        bool any = false;
        for (const auto& [sig, mag] : sf.magnitudes) {
            std::string col_name = "fault_" + sf.fault;
            if (sf.independent) col_name += std::string("_") + fault_signal_name(sig);
            column(col_name)[sf.index] = mag;
            if (mag > 0.0) any = true;
            if (sig == FaultSignal::PAc) continue;  // deferred to pass 4
            double* col = signal_column(out.data, sig);
            const double factor =
                sig == FaultSignal::TCell ? 1.0 + mag / 100.0 : 1.0 - mag / 100.0;
            col[sf.index] *= factor;
        }
        if (any) out.label[sf.index] = 1;
    }

    // pass 3: DC wiring derate, then AC power recomputed from the corrupted
    // DC operating point wherever the plant is producing
    for (std::size_t i = 0; i < n; ++i) {
        out.data.p_dc[i] *= 1.0 - out.loss_dc_wiring[i] / 100.0;
        if (out.data.p_dc[i] > 0.0 && out.data.v_dc[i] > 0.0)
            out.data.p_ac[i] = snl_ac_power(sys.inverter, out.data.p_dc[i], out.data.v_dc[i]);
        else
            out.data.p_ac[i] = 0.0;
    }

    // pass 4: inverter fault on the AC side, then the AC wiring derate
    for (const ScheduledFault& sf : schedule.entries)
        for (const auto& [sig, mag] : sf.magnitudes)
            if (sig == FaultSignal::PAc) out.data.p_ac[sf.index] *= 1.0 - mag / 100.0;
    for (std::size_t i = 0; i < n; ++i)
        out.data.p_ac[i] *= 1.0 - out.loss_ac_wiring[i] / 100.0;

    // efficiencies rebuilt from the corrupted signals
    const double area = sys.array_area_m2();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = out.data.g_poa[i];
        out.data.eta_cell[i] =
            (g > kIrradianceFloorWm2 && area > 0.0) ? out.data.p_dc[i] / (g * area) : 0.0;
        out.data.eta_inv[i] = out.data.p_dc[i] > 0.0 ? out.data.p_ac[i] / out.data.p_dc[i] : 0.0;
    }
    return out;
}

}  // namespace pvtwin
