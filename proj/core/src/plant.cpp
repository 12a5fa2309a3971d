#include "pvtwin/plant.hpp"

#include <stdexcept>

namespace pvtwin {

ProductionSeries simulate_production(const MeteoSeries& meteo, const SystemConfig& sys) {
    const std::size_t n = meteo.size();
    if (meteo.g_poa.size() != n || meteo.t_cell.size() != n || meteo.t_amb.size() != n)
        throw std::invalid_argument("simulate_production: ragged weather series");

    ProductionSeries out;
    out.resize(n);
    out.t = meteo.t;
    const double area = sys.array_area_m2();

    for (std::size_t i = 0; i < n; ++i) {
        const double g = meteo.g_poa[i];
        out.g_poa[i] = g;
        out.t_amb[i] = meteo.t_amb[i];
        out.t_cell[i] = meteo.t_cell[i];
        if (g <= kIrradianceFloorWm2) continue;  // night slot, all signals stay 0

        const OperatingConditions cond{g, meteo.t_cell[i]};
        const DiodeParams dp = translate_params(sys.module, cond);
        const MppResult module_point = solve_single_diode(dp);
        const MppResult ap = scale_to_array(module_point, sys.array);

        out.i_dc[i] = ap.i_mp;
        out.v_dc[i] = ap.v_mp;
        out.p_dc[i] = ap.p_mp;
        out.p_ac[i] = snl_ac_power(sys.inverter, ap.p_mp, ap.v_mp);
        out.i_l[i] = dp.i_l * sys.array.strings;
        out.i_sc[i] = ap.i_sc;
        out.v_oc[i] = ap.v_oc;
        out.eta_cell[i] = area > 0.0 ? ap.p_mp / (g * area) : 0.0;
        out.eta_inv[i] = ap.p_mp > 0.0 ? out.p_ac[i] / ap.p_mp : 0.0;
    }
    return out;
}

}  // namespace pvtwin
