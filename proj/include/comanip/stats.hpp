#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "comanip/geometry.hpp"

namespace comanip {

/// Per-band aggregate over a decomposition stream. Percentages are taken over
/// the five determinate bands only; indeterminate samples are excluded from
/// the denominator and reported via indeterminate_count.
struct CategoryRow {
    Category category = Category::Aligned;
    double percent_time = 0.0;
    double mean_abs_accel = 0.0;    ///< mean ||a|| within the band, m/s^2
    double mean_signed_accel = 0.0; ///< mean signed_accel within the band, m/s^2
    std::size_t sample_count = 0;
};

struct CategoryStatsTable {
    std::array<CategoryRow, 5> rows{}; ///< Aligned..Antagonistic order
    std::size_t indeterminate_count = 0;
    std::size_t total_determinate = 0;
};

/// Streaming accumulator. Aggregation is a commutative and associative
/// reduction: partial accumulators merged in any order give identical counts
/// and means within 1e-12 of a serial pass.
class CategoryStatsAccumulator {
public:
    void add(Category c, double abs_accel, double signed_accel);
    void merge(const CategoryStatsAccumulator& other);
    CategoryStatsTable finish() const;

private:
    std::array<std::size_t, 5> count_{};
    std::array<double, 5> sum_abs_{};
    std::array<double, 5> sum_signed_{};
    std::size_t indeterminate_ = 0;
};

/// Aggregate pre-computed per-sample values. Streams must be aligned
/// (same length) or an alignment error is thrown.
CategoryStatsTable category_stats(std::span<const Category> categories,
                                  std::span<const double> abs_accel,
                                  std::span<const double> signed_accel);

/// Convenience over a decomposition stream plus kinematics: derives
/// ||a|| and signed_accel(a, v) per sample.
CategoryStatsTable category_stats(std::span<const DecompositionSample> decomp,
                                  std::span<const CartesianVector> accel,
                                  std::span<const CartesianVector> vel, double v_eps = 0.01);

/// Relative-frequency density of angles over [0, 180] in bins of bin_deg
/// (default 5 degrees, 36 bins). Bin k covers [k*bin_deg, (k+1)*bin_deg) with
/// the last bin closed at 180. Angles outside [0, 180] (including NaN) are a
/// validation error; an empty stream is an empty-input error.
struct CircularDensity {
    double bin_deg = 5.0;
    std::vector<std::size_t> counts;
    std::vector<double> frequency; ///< counts / total, sums to 1
};

CircularDensity circular_density(std::span<const double> theta_deg, double bin_deg = 5.0);

enum class OverflowPolicy : unsigned char {
    ClipReport, ///< out-of-range values land in the boundary bins and are counted
    DropReport, ///< out-of-range values are only counted, never binned
};

const char* overflow_policy_name(OverflowPolicy p);

struct HistogramSpec {
    double bin_width = 1.0;
    double lo = 0.0;
    double hi = 1.0;
    OverflowPolicy policy = OverflowPolicy::DropReport;

    void validate() const;
    std::size_t bin_count() const;
};

struct Histogram {
    HistogramSpec spec;
    std::vector<std::size_t> counts;
    std::size_t outliers_low = 0;
    std::size_t outliers_high = 0;

    std::size_t outliers() const { return outliers_low + outliers_high; }
};

/// Fixed-width histogram over [lo, hi] (top edge closed). Out-of-range values
/// are reported as outliers per the overflow policy, so drop-report bins plus
/// outliers always account for every input value.
Histogram magnitude_histogram(std::span<const double> values, const HistogramSpec& spec);

} // namespace comanip
