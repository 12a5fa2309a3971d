#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvtwin/losses.hpp"
#include "pvtwin/plant.hpp"
#include "pvtwin/series.hpp"

namespace pvtwin {

// Signals a fault can corrupt. Power-like signals are multiplied by
// (1 - magnitude/100); temperature by (1 + magnitude/100), since the faults
// that touch the cell temperature heat it up.
enum class FaultSignal { PDc, IDc, VDc, PAc, VOc, ISc, TCell };

const char* fault_signal_name(FaultSignal s);

struct FaultEffect {
    FaultSignal signal;
    double min_pct = 0.0;
    double max_pct = 0.0;
};

struct FaultSpec {
    std::string name;
    std::vector<FaultEffect> effects;
    // one magnitude shared across effects unless the draws are independent
    bool independent_draws = false;
};

// The stock fault catalog:
//   SS  shading          10-20%    P_DC
//   HS  heavy shading    10-70%    P_DC
//   SOI soiling event     8-12%    P_DC
//   HSp hot spot             2%    T_cell up, P_DC down (per affected string)
//   DEG degradation       0-50%    P_DC
//   CC  cell cracks     0.9-42.8%  T_cell up, P_DC down
//   LL  line loss        20-80%    V_oc
//   GF  ground fault     0-51.9%   I_sc, P_DC
//   SAF sensor fault     0-62.5% I_DC / 0-80% V_DC, independent draws
//   PAF power sensor     0-87.5%   V_DC
//   IF  inverter fault   0-100%    P_AC
std::vector<FaultSpec> default_fault_specs();

// One corrupted sample: position in the series plus the drawn magnitude of
// every affected signal.
struct ScheduledFault {
    std::size_t index = 0;
    std::string fault;
    std::vector<std::pair<FaultSignal, double>> magnitudes;
    bool independent = false;  // magnitudes were drawn per signal
};

struct FaultSchedule {
    std::vector<ScheduledFault> entries;  // ascending by index
};

// Per day: one fault type drawn from the catalog, an affected fraction
// ~ U(0, 0.5) of the day's production-hours samples, indices drawn without
// replacement, magnitudes ~ U(min, max) per point (per signal when the fault
// type marks independent draws). Deterministic under the seed.
FaultSchedule generate_fault_schedule(const std::vector<Timestamp>& t,
                                      const std::vector<FaultSpec>& specs, std::uint64_t seed);

// One archive day of the requested month, drawn uniformly; the caller
// replicates it across the synthetic month. Throws when the archive has no
// day in that month.
DailyLosses sample_daily_losses(const std::vector<DailyLosses>& archive, int month,
                                std::uint64_t seed);

// The labeled dataset: derated and fault-corrupted signals plus per-fault
// magnitude columns and the binary label (1 = any fault active).
struct LabeledSeries {
    ProductionSeries data;
    std::vector<int> label;
    // column name -> per-sample magnitude in percent (0 where inactive)
    std::vector<std::pair<std::string, std::vector<double>>> fault_columns;
    // daily loss derates expanded to sample cadence, percent
    std::vector<double> loss_soiling, loss_degradation, loss_dc_wiring, loss_ac_wiring,
        loss_total;
};

// Applies daily loss derates and the fault schedule to a clean production
// series, in physical order: panel-level derates (soiling, degradation) on
// the DC signals, then DC-side faults, then the DC wiring derate, then the
// inverter conversion recomputed from the corrupted DC operating point, then
// the inverter fault, then the AC wiring derate. eta columns are rebuilt at
// the end. `daily` must cover every date of the series.
LabeledSeries apply_faults(const ProductionSeries& clean, const FaultSchedule& schedule,
                           const std::vector<DailyLosses>& daily, const SystemConfig& sys);

}  // namespace pvtwin
