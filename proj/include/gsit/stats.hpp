#ifndef GSIT_STATS_HPP
#define GSIT_STATS_HPP

#include <optional>
#include <span>

#include "gsit/errors.hpp"

namespace gsit::num {

// Population moments. Shape moments are undefined (disengaged) when the
// variance is at or below 1e-12.
struct MomentStats {
    double mean = 0.0;
    double variance = 0.0; // population, not sample-corrected
    std::optional<double> skewness;        // m3 / m2^1.5
    std::optional<double> excess_kurtosis; // m4 / m2^2 - 3

    bool degenerate() const { return !skewness.has_value(); }
    // Throw DegenerateDistributionError when the moment is undefined.
    double skewness_or_throw() const;
    double excess_kurtosis_or_throw() const;
};

// Requires at least two values.
MomentStats moments(std::span<const double> values);

} // namespace gsit::num

#endif
