#include "comanip/differentiate.hpp"

#include <cmath>
#include <string>

namespace comanip {

Unit unit_derivative(Unit u) {
    switch (u) {
        case Unit::Position: return Unit::Velocity;
        case Unit::Velocity: return Unit::Acceleration;
        default:
            throw_error(Errc::Validation,
                        std::string("no derivative unit for ") + unit_name(u) + " stream");
    }
}

namespace {

void check_sampling(std::span<const double> t, std::size_t n, double sample_rate_hz) {
    if (sample_rate_hz <= 0.0 || !std::isfinite(sample_rate_hz)) {
        throw_error(Errc::Validation, "sample rate must be finite and positive");
    }
    if (n < 3) {
        throw_error(Errc::Sampling, "differentiate needs at least 3 samples, got " +
                                        std::to_string(n));
    }
    if (t.size() != n) {
        throw_error(Errc::Alignment, "timestamp stream length does not match value stream");
    }
    const double dt = 1.0 / sample_rate_hz;
    for (std::size_t i = 1; i < n; ++i) {
        const double gap = t[i] - t[i - 1];
        if (!(gap > 0.0) || std::fabs(gap - dt) > 0.01 * dt) {
            throw_error(Errc::Sampling,
                        "non-uniform sampling at index " + std::to_string(i) + ": gap " +
                            std::to_string(gap) + " s vs nominal " + std::to_string(dt) + " s");
        }
    }
}

} // namespace

std::vector<double> differentiate(std::span<const double> t, std::span<const double> x,
                                  double sample_rate_hz) {
    const std::size_t n = x.size();
    check_sampling(t, n, sample_rate_hz);
    const double inv_dt = sample_rate_hz;
    const double inv_2dt = 0.5 * sample_rate_hz;

    std::vector<double> d(n);
    d[0] = (x[1] - x[0]) * inv_dt;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (x[i + 1] - x[i - 1]) * inv_2dt;
    }
    d[n - 1] = (x[n - 1] - x[n - 2]) * inv_dt;
    return d;
}

std::vector<CartesianVector> differentiate(std::span<const double> t,
                                           std::span<const CartesianVector> x,
                                           double sample_rate_hz) {
    const std::size_t n = x.size();
    check_sampling(t, n, sample_rate_hz);
    const Unit out_unit = unit_derivative(x[0].unit);
    const double inv_dt = sample_rate_hz;
    const double inv_2dt = 0.5 * sample_rate_hz;

    std::vector<CartesianVector> d;
    d.reserve(n);
    auto diff = [&](const CartesianVector& hi, const CartesianVector& lo, double s) {
        return CartesianVector((hi.x - lo.x) * s, (hi.y - lo.y) * s, (hi.z - lo.z) * s, out_unit);
    };
    d.push_back(diff(x[1], x[0], inv_dt));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d.push_back(diff(x[i + 1], x[i - 1], inv_2dt));
    }
    d.push_back(diff(x[n - 1], x[n - 2], inv_dt));
    return d;
}

} // namespace comanip
