#pragma once

#include <cstddef>
#include <vector>

namespace pvtwin {

double mean(const std::vector<double>& v);
// population variance (divides by n); sample_variance divides by n-1
double variance(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);
double stddev(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);

// median of a copy; n == 0 is the caller's bug and asserts
double median(std::vector<double> v);

// linear-interpolation quantile (the common "type 7" definition):
// position p*(n-1) between order statistics. p in [0, 1].
double quantile(std::vector<double> v, double p);

inline double percentile(std::vector<double> v, double pct) {
    return quantile(std::move(v), pct / 100.0);
}

struct Quartiles {
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
    double iqr() const { return q3 - q1; }
};

Quartiles quartiles(std::vector<double> v);

// ordinary least squares y = intercept + slope*x
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pvtwin
