#include "pvtwin/singlediode.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pvtwin {

namespace {

constexpr double kBoltzmannEv = 8.617333262e-5;  // eV/K
constexpr double kTRefK = 298.15;                // 25 C
constexpr double kGRef = 1000.0;                 // W/m2

}  // namespace

double adjust_alpha(double alpha_sc, double adjust_pct) {
    return alpha_sc * (1.0 - adjust_pct / 100.0);
}

double photocurrent(double g_poa, double t_cell, double i_l_ref, double alpha_adj) {
    return (g_poa / kGRef) * (i_l_ref + alpha_adj * (t_cell - 25.0));
}

DiodeParams translate_params(const ModuleParams& module, const OperatingConditions& cond) {
    if (!(cond.g_poa > 0.0))
        throw std::domain_error("translate_params: irradiance must be positive");
    const double t_k = cond.t_cell + 273.15;
    if (!(t_k > 0.0))
        throw std::domain_error("translate_params: cell temperature below absolute zero");

    const double alpha_adj = adjust_alpha(module.alpha_sc, module.adjust_pct);
    const double eg = module.eg_ref_ev * (1.0 - module.d_eg_dt * (t_k - kTRefK));

    DiodeParams p;
    p.i_l = photocurrent(cond.g_poa, cond.t_cell, module.i_l_ref, alpha_adj);
    p.a = module.a_ref * t_k / kTRefK;
    p.i_o = module.i_o_ref * std::pow(t_k / kTRefK, 3.0) *
            std::exp(module.eg_ref_ev / (kBoltzmannEv * kTRefK) - eg / (kBoltzmannEv * t_k));
    p.r_s = module.r_s;
    p.r_sh = module.r_sh_ref * kGRef / cond.g_poa;
    return p;
}

double diode_residual(const DiodeParams& p, double v, double i) {
    const double vd = v + i * p.r_s;
    return p.i_l - p.i_o * std::expm1(vd / p.a) - vd / p.r_sh - i;
}

double lambert_w0(double x) {
    constexpr double kInvE = 0.36787944117144233;
    if (std::isnan(x) || x < -kInvE) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0.0) return 0.0;

    double w;
    if (x < -0.3) {
        // series about the branch point x = -1/e
        const double p = std::sqrt(2.0 * (1.0 + x / kInvE));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < std::exp(1.0)) {
        w = std::log1p(x) * 0.75;  // mild underestimate, keeps Halley monotone
    } else {
        const double lx = std::log(x);
        w = lx - std::log(lx);
    }

    // Halley iteration on f(w) = w e^w - x
    for (int iter = 0; iter < 64; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

double lambert_w0_of_exp(double y) {
    // solve w + ln w = y by Newton; w0 = y - ln y is within O(ln y / y)
    double w = y - std::log(y);
    for (int iter = 0; iter < 64; ++iter) {
        const double step = (y - w - std::log(w)) * w / (w + 1.0);
        w += step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

namespace {

// bisection on the residual in I; monotone decreasing in I, so the bracket
// is trivial to maintain. Used as the fallback and by the V_oc search.
double current_by_bisection(const DiodeParams& p, double v) {
    double hi = p.i_l + p.i_o;  // residual <= 0 here for v >= 0
    double lo = -(p.i_l + p.i_o + 1.0);
    while (!(diode_residual(p, v, lo) > 0.0)) {
        lo *= 2.0;
        if (!std::isfinite(lo)) return std::numeric_limits<double>::quiet_NaN();
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double r = diode_residual(p, v, mid);
        if (r > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double current_at_voltage(const DiodeParams& p, double v) {
    if (p.r_s <= 0.0) {
        // series resistance drops out; the equation is already explicit
        return p.i_l - p.i_o * std::expm1(v / p.a) - v / p.r_sh;
    }
    // explicit Lambert-W solution; the W argument is evaluated in log space
    // because exp((Rs (IL+Io) + V) / ...) overflows long before W does
    const double gsh = 1.0 + p.r_s / p.r_sh;
    const double scale = p.a * gsh;
    const double log_theta =
        std::log(p.r_s * p.i_o / scale) + (p.r_s * (p.i_l + p.i_o) + v) / scale;
    double w;
    if (log_theta > 690.0) {
        w = lambert_w0_of_exp(log_theta);
    } else {
        w = lambert_w0(std::exp(log_theta));
    }
    const double i = (p.i_l + p.i_o - v / p.r_sh) / gsh - (p.a / p.r_s) * w;
    if (!std::isfinite(i)) return current_by_bisection(p, v);
    return i;
}

MppResult solve_single_diode(const DiodeParams& p) {
    if (!(p.i_l > 0.0) || !(p.i_o > 0.0) || !(p.a > 0.0) || !(p.r_sh > 0.0) || p.r_s < 0.0)
        throw std::domain_error("solve_single_diode: parameters out of domain");

    MppResult out;
    out.i_sc = current_at_voltage(p, 0.0);

    // V_oc bracket: at the ideal-diode open-circuit voltage the shunt term
    // forces the current negative, so the root lies inside [0, v_hi]
    const double v_hi = p.a * std::log1p(p.i_l / p.i_o);
    double lo = 0.0, hi = v_hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (current_at_voltage(p, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.v_oc = 0.5 * (lo + hi);

    // golden-section maximization of P(V) on [0, v_oc]
    constexpr double kGolden = 0.6180339887498949;  // 1/phi
    double a = 0.0, b = out.v_oc;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double p1 = x1 * current_at_voltage(p, x1);
    double p2 = x2 * current_at_voltage(p, x2);
    const double tol = 1e-6 * out.v_oc;
    while (b - a > tol) {
        if (p1 < p2) {
            a = x1;
            x1 = x2;
            p1 = p2;
            x2 = a + kGolden * (b - a);
            p2 = x2 * current_at_voltage(p, x2);
        } else {
            b = x2;
            x2 = x1;
            p2 = p1;
            x1 = b - kGolden * (b - a);
            p1 = x1 * current_at_voltage(p, x1);
        }
    }
    out.v_mp = 0.5 * (a + b);
    out.i_mp = current_at_voltage(p, out.v_mp);
    out.p_mp = out.v_mp * out.i_mp;
    return out;
}

MppResult scale_to_array(const MppResult& module_point, const ArrayConfig& array) {
    MppResult out = module_point;
    const double series = static_cast<double>(array.modules_per_string);
    const double parallel = static_cast<double>(array.strings);
    out.v_mp *= series;
    out.v_oc *= series;
    out.i_mp *= parallel;
    out.i_sc *= parallel;
    out.p_mp = out.v_mp * out.i_mp;
    return out;
}

}  // namespace pvtwin
