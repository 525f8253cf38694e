#include "comanip/stats.hpp"

#include <cmath>
#include <string>

#include "comanip/netforce.hpp"

namespace comanip {

void CategoryStatsAccumulator::add(Category c, double abs_accel, double signed_accel) {
    if (c == Category::Indeterminate) {
        ++indeterminate_;
        return;
    }
    const auto i = static_cast<std::size_t>(c);
    ++count_[i];
    sum_abs_[i] += abs_accel;
    sum_signed_[i] += signed_accel;
}

void CategoryStatsAccumulator::merge(const CategoryStatsAccumulator& other) {
    for (std::size_t i = 0; i < 5; ++i) {
        count_[i] += other.count_[i];
        sum_abs_[i] += other.sum_abs_[i];
        sum_signed_[i] += other.sum_signed_[i];
    }
    indeterminate_ += other.indeterminate_;
}

CategoryStatsTable CategoryStatsAccumulator::finish() const {
    CategoryStatsTable table;
    table.indeterminate_count = indeterminate_;
    for (std::size_t i = 0; i < 5; ++i) table.total_determinate += count_[i];
    for (std::size_t i = 0; i < 5; ++i) {
        CategoryRow& row = table.rows[i];
        row.category = static_cast<Category>(i);
        row.sample_count = count_[i];
        if (table.total_determinate > 0) {
            row.percent_time = 100.0 * static_cast<double>(count_[i]) /
                               static_cast<double>(table.total_determinate);
        }
        if (count_[i] > 0) {
            row.mean_abs_accel = sum_abs_[i] / static_cast<double>(count_[i]);
            row.mean_signed_accel = sum_signed_[i] / static_cast<double>(count_[i]);
        }
    }
    return table;
}

CategoryStatsTable category_stats(std::span<const Category> categories,
                                  std::span<const double> abs_accel,
                                  std::span<const double> signed_accel) {
    if (categories.size() != abs_accel.size() || categories.size() != signed_accel.size()) {
        throw_error(Errc::Alignment, "category/kinematics streams are not aligned: " +
                                         std::to_string(categories.size()) + " vs " +
                                         std::to_string(abs_accel.size()) + " vs " +
                                         std::to_string(signed_accel.size()));
    }
    CategoryStatsAccumulator acc;
    for (std::size_t i = 0; i < categories.size(); ++i) {
        acc.add(categories[i], abs_accel[i], signed_accel[i]);
    }
    return acc.finish();
}

CategoryStatsTable category_stats(std::span<const DecompositionSample> decomp,
                                  std::span<const CartesianVector> accel,
                                  std::span<const CartesianVector> vel, double v_eps) {
    if (decomp.size() != accel.size() || decomp.size() != vel.size()) {
        throw_error(Errc::Alignment, "decomposition/kinematics streams are not aligned");
    }
    CategoryStatsAccumulator acc;
    for (std::size_t i = 0; i < decomp.size(); ++i) {
        acc.add(decomp[i].category, accel[i].norm(), signed_accel(accel[i], vel[i], v_eps));
    }
    return acc.finish();
}

CircularDensity circular_density(std::span<const double> theta_deg, double bin_deg) {
    if (theta_deg.empty()) {
        throw_error(Errc::EmptyInput, "circular_density over an empty angle stream");
    }
    if (!(bin_deg > 0.0) || !std::isfinite(bin_deg)) {
        throw_error(Errc::Validation, "bin_deg must be finite and positive");
    }
    const double nbins_real = 180.0 / bin_deg;
    const auto nbins = static_cast<std::size_t>(std::lround(nbins_real));
    if (nbins == 0 || std::fabs(nbins_real - static_cast<double>(nbins)) > 1e-9) {
        throw_error(Errc::Validation, "bin_deg must divide 180 evenly");
    }

    CircularDensity out;
    out.bin_deg = bin_deg;
    out.counts.assign(nbins, 0);
    for (double th : theta_deg) {
        if (!(th >= 0.0 && th <= 180.0)) {
            throw_error(Errc::Validation, "angle outside [0, 180] in circular_density");
        }
        auto k = static_cast<std::size_t>(th / bin_deg);
        if (k >= nbins) k = nbins - 1; // 180 belongs to the last bin
        ++out.counts[k];
    }
    out.frequency.resize(nbins);
    const auto total = static_cast<double>(theta_deg.size());
    for (std::size_t k = 0; k < nbins; ++k) {
        out.frequency[k] = static_cast<double>(out.counts[k]) / total;
    }
    return out;
}

const char* overflow_policy_name(OverflowPolicy p) {
    switch (p) {
        case OverflowPolicy::ClipReport: return "clip-report";
        case OverflowPolicy::DropReport: return "drop-report";
    }
    return "?";
}

void HistogramSpec::validate() const {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw_error(Errc::Validation, "histogram bin_width must be finite and positive");
    }
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw_error(Errc::Validation, "histogram range must be finite with hi > lo");
    }
}

std::size_t HistogramSpec::bin_count() const {
    return static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-12));
}

Histogram magnitude_histogram(std::span<const double> values, const HistogramSpec& spec) {
    spec.validate();
    const std::size_t nbins = spec.bin_count();

    Histogram h;
    h.spec = spec;
    h.counts.assign(nbins, 0);
    for (double v : values) {
        if (std::isnan(v)) {
            throw_error(Errc::Validation, "NaN value in magnitude_histogram input");
        }
        if (v < spec.lo) {
            ++h.outliers_low;
            if (spec.policy == OverflowPolicy::ClipReport) ++h.counts.front();
            continue;
        }
        if (v > spec.hi) {
            ++h.outliers_high;
            if (spec.policy == OverflowPolicy::ClipReport) ++h.counts.back();
            continue;
        }
        auto k = static_cast<std::size_t>((v - spec.lo) / spec.bin_width);
        if (k >= nbins) k = nbins - 1; // hi itself closes the last bin
        ++h.counts[k];
    }
    return h;
}

} // namespace comanip
