#pragma once

#include <span>
#include <vector>

#include "comanip/vec3.hpp"

namespace comanip {

/// Unit of the time derivative of a stream with unit `u`
/// (position -> velocity -> acceleration). Other units have no derivative
/// stream in this pipeline and are a validation error.
Unit unit_derivative(Unit u);

/// Finite-difference derivative of a uniformly sampled stream: central
/// differences at interior points, one-sided at the two endpoints.
/// Requires at least 3 samples and timestamps uniform to within 1% of the
/// nominal spacing 1/sample_rate_hz; violations are sampling errors.
std::vector<double> differentiate(std::span<const double> t, std::span<const double> x,
                                  double sample_rate_hz);

std::vector<CartesianVector> differentiate(std::span<const double> t,
                                           std::span<const CartesianVector> x,
                                           double sample_rate_hz);

} // namespace comanip
