#include "pvtwin/stats.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace pvtwin {

double mean(const std::vector<double>& v) {
    assert(!v.empty());
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    assert(!v.empty());
    const double m = mean(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    assert(v.size() >= 2);
    const double m = mean(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double stddev(const std::vector<double>& v) { return std::sqrt(variance(v)); }
double sample_stddev(const std::vector<double>& v) { return std::sqrt(sample_variance(v)); }

double median(std::vector<double> v) {
    assert(!v.empty());
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double hi = v[mid];
    if (n % 2 != 0) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
}

double quantile(std::vector<double> v, double p) {
    assert(!v.empty());
    assert(p >= 0.0 && p <= 1.0);
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

Quartiles quartiles(std::vector<double> v) {
    assert(!v.empty());
    std::sort(v.begin(), v.end());
    auto at = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        if (lo + 1 >= v.size()) return v.back();
        return v[lo] + (pos - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
    };
    return Quartiles{at(0.25), at(0.50), at(0.75)};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    assert(x.size() == y.size() && x.size() >= 2);
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;
    return fit;
}

}  // namespace pvtwin
