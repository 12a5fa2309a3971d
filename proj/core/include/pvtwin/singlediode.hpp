#pragma once

namespace pvtwin {

// CEC-style five-parameter module characterization at reference conditions
// (1000 W/m2, 25 C cell temperature), plus the thermal/geometry extras the
// rest of the pipeline needs.
struct ModuleParams {
    double alpha_sc = 0.0;    // short-circuit current temperature coefficient, A/C
    double a_ref = 0.0;       // modified ideality factor at reference, V
    double i_l_ref = 0.0;     // photocurrent at reference, A (nameplate short-circuit current)
    double i_o_ref = 0.0;     // diode reverse saturation current at reference, A
    double r_sh_ref = 0.0;    // shunt resistance at reference, ohm
    double r_s = 0.0;         // series resistance, ohm (temperature independent)
    double adjust_pct = 0.0;  // CEC adjustment to alpha_sc, percent
    double eg_ref_ev = 1.12;  // band gap at reference, eV
    double d_eg_dt = 0.0;     // band gap temperature parameter, 1/K
    double gamma_pmp = 0.0;   // max-power temperature coefficient, 1/C (e.g. -0.0036)
    double noct_c = 45.0;     // nominal operating cell temperature, C
    double area_m2 = 0.0;     // aperture area of one module
    double nameplate_w = 0.0; // rated max power at reference conditions
};

struct OperatingConditions {
    double g_poa = 0.0;   // plane-of-array irradiance, W/m2
    double t_cell = 25.0; // cell temperature, C
};

// five parameters translated to an operating point
struct DiodeParams {
    double i_l = 0.0;   // photocurrent, A
    double i_o = 0.0;   // saturation current, A
    double a = 0.0;     // modified ideality factor, V
    double r_s = 0.0;   // series resistance, ohm
    double r_sh = 0.0;  // shunt resistance, ohm
};

struct MppResult {
    double v_mp = 0.0;
    double i_mp = 0.0;
    double p_mp = 0.0;
    double v_oc = 0.0;
    double i_sc = 0.0;
};

struct ArrayConfig {
    int modules_per_string = 1;
    int strings = 1;
    int module_count() const { return modules_per_string * strings; }
};

// effective short-circuit temperature coefficient after the CEC adjustment:
// alpha' = alpha_sc * (1 - adjust_pct / 100)
double adjust_alpha(double alpha_sc, double adjust_pct);

// photocurrent at operating conditions:
// I_L = (G / 1000) * (I_L_ref + alpha' * (T_cell - 25))
double photocurrent(double g_poa, double t_cell, double i_l_ref, double alpha_adj);

// Translates the reference parameter set to the operating point:
//   a(T)    = a_ref * T_K / T_ref_K
//   I_o(T)  = I_o_ref * (T_K/T_ref_K)^3 * exp(Eg_ref/(kB T_ref_K) - Eg(T)/(kB T_K)),
//             with Eg(T) = Eg_ref * (1 - dEgdT * (T_K - T_ref_K))
//   R_sh(G) = R_sh_ref * 1000 / G
//   R_s     = R_s_ref
// Throws std::domain_error when g_poa <= 0 (the shunt translation degenerates).
DiodeParams translate_params(const ModuleParams& module, const OperatingConditions& cond);

// residual of the implicit diode equation at a candidate point:
//   I_L - I_o * (exp((V + I R_s)/a) - 1) - (V + I R_s)/R_sh - I
double diode_residual(const DiodeParams& p, double v, double i);

// Terminal current at a given voltage from the explicit Lambert-W form of
// the diode equation, with a bisection fallback on the residual when the
// explicit form degrades numerically.
double current_at_voltage(const DiodeParams& p, double v);

// Full curve solution: short-circuit current, open-circuit voltage (bisection
// on the terminal current) and the maximum power point (golden-section search
// on P(V) over [0, V_oc], converged to 1e-6 * V_oc in voltage).
MppResult solve_single_diode(const DiodeParams& p);

// module-level operating point scaled to the array: voltages multiply by
// modules per string, currents by parallel string count
MppResult scale_to_array(const MppResult& module_point, const ArrayConfig& array);

// principal branch of the Lambert W function (x >= -1/e), exposed for tests
double lambert_w0(double x);
// W(exp(y)) evaluated without forming exp(y); valid for y >= 1
double lambert_w0_of_exp(double y);

}  // namespace pvtwin
