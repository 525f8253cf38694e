#include "comanip/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace comanip {

const char* filter_method_name(FilterMethod m) {
    switch (m) {
        case FilterMethod::ZeroPhaseButterworth: return "zero-phase-butterworth";
        case FilterMethod::MovingAverage: return "moving-average";
        case FilterMethod::None: return "none";
    }
    return "?";
}

FilterMethod filter_method_from_name(const std::string& name) {
    if (name == "zero-phase-butterworth") return FilterMethod::ZeroPhaseButterworth;
    if (name == "moving-average") return FilterMethod::MovingAverage;
    if (name == "none") return FilterMethod::None;
    throw_error(Errc::Config, "unknown filter method '" + name + "'");
}

void FilterConfig::validate(double sample_rate_hz) const {
    if (method == FilterMethod::None) return;
    if (!(cutoff_hz > 0.0) || !std::isfinite(cutoff_hz)) {
        throw_error(Errc::Config, "filter cutoff must be positive");
    }
    if (cutoff_hz >= 0.5 * sample_rate_hz) {
        throw_error(Errc::Config, "filter cutoff " + std::to_string(cutoff_hz) +
                                      " Hz reaches the Nyquist rate of a " +
                                      std::to_string(sample_rate_hz) + " Hz stream");
    }
    if (order < 1) {
        throw_error(Errc::Config, "filter order must be >= 1");
    }
}

namespace {

struct Biquad {
    double b0, b1, b2; // numerator
    double a1, a2;     // denominator (a0 normalized to 1)
};

// Butterworth low-pass as second-order sections via the bilinear transform.
// Each section is normalized to unity DC gain.
std::vector<Biquad> butterworth_sos(int order, double cutoff_hz, double sample_rate_hz) {
    using cd = std::complex<double>;
    const double fs2 = 2.0 * sample_rate_hz;
    const double warped = fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

    std::vector<Biquad> sections;
    // Analog poles sit on the left half of the circle of radius `warped`;
    // pole k and pole order-1-k are conjugates.
    for (int k = 0; k < order / 2; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + order + 1.0) / (2.0 * order);
        const cd s = warped * cd(std::cos(theta), std::sin(theta));
        const cd z = (fs2 + s) / (fs2 - s);
        const double a1 = -2.0 * z.real();
        const double a2 = std::norm(z);
        const double g = (1.0 + a1 + a2) / 4.0; // H(1) = 1
        sections.push_back({g, 2.0 * g, g, a1, a2});
    }
    if (order % 2 == 1) {
        const double s = -warped;
        const double z = (fs2 + s) / (fs2 - s);
        const double g = (1.0 - z) / 2.0;
        sections.push_back({g, g, 0.0, -z, 0.0});
    }
    return sections;
}

// Steady-state internal state for a unit-valued input; scaled by the first
// sample before each pass to suppress edge transients.
void filt_with_zi(const Biquad& s, std::vector<double>& x) {
    const double x0 = x.empty() ? 0.0 : x.front();
    const double den = 1.0 + s.a1 + s.a2;
    const double y_ss = (s.b0 + s.b1 + s.b2) / den;
    double z1 = (y_ss - s.b0) * x0;
    double z2 = (s.b2 - s.a2 * y_ss) * x0;
    for (double& v : x) {
        const double y = s.b0 * v + z1;
        z1 = s.b1 * v - s.a1 * y + z2;
        z2 = s.b2 * v - s.a2 * y;
        v = y;
    }
}

std::vector<double> filtfilt(const std::vector<Biquad>& sos, std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) return {x.begin(), x.end()};

    std::size_t padlen = 3 * (2 * sos.size() + 1);
    padlen = std::min(padlen, n - 1);

    // Odd extension mirrors the signal about its endpoints.
    std::vector<double> ext;
    ext.reserve(n + 2 * padlen);
    for (std::size_t i = 0; i < padlen; ++i) {
        ext.push_back(2.0 * x[0] - x[padlen - i]);
    }
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 0; i < padlen; ++i) {
        ext.push_back(2.0 * x[n - 1] - x[n - 2 - i]);
    }

    for (const Biquad& s : sos) filt_with_zi(s, ext);
    std::reverse(ext.begin(), ext.end());
    for (const Biquad& s : sos) filt_with_zi(s, ext);
    std::reverse(ext.begin(), ext.end());

    return {ext.begin() + static_cast<std::ptrdiff_t>(padlen),
            ext.begin() + static_cast<std::ptrdiff_t>(padlen + n)};
}

std::vector<double> moving_average(std::span<const double> x, double cutoff_hz,
                                   double sample_rate_hz) {
    const std::size_t n = x.size();
    long w = std::lround(sample_rate_hz / cutoff_hz);
    if (w < 1) w = 1;
    if (w % 2 == 0) ++w;
    const long r = (w - 1) / 2;

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Shrink the radius near the edges so the window stays centered.
        const long ri = std::min({r, static_cast<long>(i), static_cast<long>(n - 1 - i)});
        double sum = 0.0;
        for (long j = -ri; j <= ri; ++j) {
            sum += x[static_cast<std::size_t>(static_cast<long>(i) + j)];
        }
        out[i] = sum / static_cast<double>(2 * ri + 1);
    }
    return out;
}

} // namespace

std::vector<double> lowpass(std::span<const double> x, const FilterConfig& config,
                            double sample_rate_hz) {
    config.validate(sample_rate_hz);
    switch (config.method) {
        case FilterMethod::None:
            return {x.begin(), x.end()};
        case FilterMethod::MovingAverage:
            return moving_average(x, config.cutoff_hz, sample_rate_hz);
        case FilterMethod::ZeroPhaseButterworth: {
            const auto sos = butterworth_sos(config.order, config.cutoff_hz, sample_rate_hz);
            return filtfilt(sos, x);
        }
    }
    throw_error(Errc::Config, "unhandled filter method");
}

std::vector<CartesianVector> lowpass(std::span<const CartesianVector> x,
                                     const FilterConfig& config, double sample_rate_hz) {
    config.validate(sample_rate_hz);
    const std::size_t n = x.size();
    if (n == 0) return {};
    const Unit unit = x[0].unit;

    std::vector<double> ch(n);
    std::array<std::vector<double>, 3> filtered;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            ch[i] = c == 0 ? x[i].x : (c == 1 ? x[i].y : x[i].z);
        }
        filtered[c] = lowpass(std::span<const double>(ch), config, sample_rate_hz);
    }
    std::vector<CartesianVector> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(filtered[0][i], filtered[1][i], filtered[2][i], unit);
    }
    return out;
}

} // namespace comanip
