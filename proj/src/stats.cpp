#include "gsit/stats.hpp"

#include <cmath>

namespace gsit::num {

double MomentStats::skewness_or_throw() const {
    if (!skewness) throw DegenerateDistributionError("skewness undefined: variance <= 1e-12");
    return *skewness;
}

double MomentStats::excess_kurtosis_or_throw() const {
    if (!excess_kurtosis) throw DegenerateDistributionError("kurtosis undefined: variance <= 1e-12");
    return *excess_kurtosis;
}

MomentStats moments(std::span<const double> values) {
    if (values.size() < 2) throw ContractError("moments: need at least two values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    MomentStats s;
    s.mean = mean;
    s.variance = m2;
    if (m2 > 1e-12) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return s;
}

} // namespace gsit::num
