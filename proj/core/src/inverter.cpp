#include "pvtwin/inverter.hpp"

#include <stdexcept>

namespace pvtwin {

double snl_ac_power(const InverterParams& inv, double p_dc, double v_dc) {
    const double dv = v_dc - inv.vdco;
    const double a = inv.pdco * (1.0 + inv.c1 * dv);
    const double b = inv.pso * (1.0 + inv.c2 * dv);
    const double c = inv.c0 * (1.0 + inv.c3 * dv);
    if (a == b) throw std::domain_error("snl_ac_power: A == B, model degenerates");

    if (p_dc <= b) return 0.0;  // below startup power the inverter stays off

    const double ab = a - b;
    const double pb = p_dc - b;
    const double p_ac = (inv.paco / ab - c * ab) * pb - c * pb * pb;
    if (p_ac <= 0.0) return 0.0;
    if (p_ac >= inv.paco) return inv.paco;  // saturation clamp
    return p_ac;
}

}  // namespace pvtwin
