#pragma once

#include <span>
#include <vector>

#include "comanip/vec3.hpp"

namespace comanip {

enum class FilterMethod : unsigned char {
    ZeroPhaseButterworth,
    MovingAverage,
    None,
};

const char* filter_method_name(FilterMethod m);
FilterMethod filter_method_from_name(const std::string& name);

struct FilterConfig {
    double cutoff_hz = 5.0;
    int order = 2;
    FilterMethod method = FilterMethod::ZeroPhaseButterworth;

    /// Throws a config error when the cutoff reaches the Nyquist rate or the
    /// order is < 1.
    void validate(double sample_rate_hz) const;
};

/// Zero-phase low-pass. Butterworth sections are applied forward and backward
/// (squaring the magnitude response, cancelling phase); the moving-average
/// method uses a centered window of ~sample_rate/cutoff samples. DC gain is 1;
/// method None returns the input unchanged.
std::vector<double> lowpass(std::span<const double> x, const FilterConfig& config,
                            double sample_rate_hz);

/// Per-channel application to a vector stream (unit tag preserved).
std::vector<CartesianVector> lowpass(std::span<const CartesianVector> x,
                                     const FilterConfig& config, double sample_rate_hz);

} // namespace comanip
