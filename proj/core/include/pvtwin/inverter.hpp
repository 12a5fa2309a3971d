#pragma once

namespace pvtwin {

// Sandia (SNL) grid-connected inverter performance model coefficients.
struct InverterParams {
    double paco = 0.0;  // rated AC output, W (saturation limit)
    double pdco = 0.0;  // DC input at which rated AC output is reached, W
    double vdco = 0.0;  // nominal DC input voltage, V
    double pso = 0.0;   // DC power required to start inversion, W
    double c0 = 0.0;    // curvature of the AC-vs-DC power curve, 1/W
    double c1 = 0.0;    // variation of pdco with DC voltage, 1/V
    double c2 = 0.0;    // variation of pso with DC voltage, 1/V
    double c3 = 0.0;    // variation of c0 with DC voltage, 1/V
};

// AC output for a DC operating point:
//   A = pdco * (1 + c1 (V - vdco)),  B = pso * (1 + c2 (V - vdco)),
//   C = c0   * (1 + c3 (V - vdco)),
//   P_AC = (paco/(A-B) - C (A-B)) (P_DC - B) - C (P_DC - B)^2
// clamped to 0 below the startup power B and to paco at saturation.
// Throws std::domain_error when A == B (the model degenerates).
double snl_ac_power(const InverterParams& inv, double p_dc, double v_dc);

}  // namespace pvtwin
