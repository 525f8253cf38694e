#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "comanip/filters.hpp"
#include "comanip/netforce.hpp"
#include "comanip/stats.hpp"
#include "comanip/tension.hpp"
#include "comanip/trial.hpp"

namespace comanip {

/// Resolved configuration for one report run. Field defaults are the module
/// defaults; the CLI layers flag and config-file overrides on top and always
/// dumps the resolved set to provenance.json.
struct RunConfig {
    NetSource net_source = NetSource::SumOfAgents;
    double eps_net = 0.5; ///< N; below this the net-force direction is indeterminate
    CategoryBands bands{};
    FilterConfig filter{};
    TensionMode tension_mode = TensionMode::Others;
    double eps_dot = 1e-9;
    double v_eps = 0.01;
    double density_bin_deg = 5.0;
    HistogramSpec parallel_hist{1.0, -60.0, 60.0, OverflowPolicy::DropReport};
    HistogramSpec perp_hist{1.0, 0.0, 60.0, OverflowPolicy::DropReport};
    HistogramSpec tension_hist{1.0, -40.0, 40.0, OverflowPolicy::DropReport};
    std::string agent_id; ///< empty selects the trial's first agent

    void validate(double sample_rate_hz) const;
};

/// One line of the invariant suite embedded in every report bundle.
struct ReportCheck {
    std::string name;
    bool ok = false;
    double observed = 0.0;
    double threshold = 0.0;
};

struct StreamProvenance {
    bool velocity_derived = false;
    bool acceleration_derived = false;
    bool yaw_rate_derived = false;
};

struct ReportBundle {
    std::string trial_id;
    std::string agent_id;
    std::size_t sample_count = 0;

    CategoryStatsTable category_stats;
    CircularDensity density;
    Histogram parallel_hist;
    Histogram perp_hist;
    Histogram tension_hist;
    TensionSeries tension;
    std::vector<ReportCheck> checks;
    StreamProvenance streams;

    bool all_checks_ok() const;
};

/// Full analysis pipeline for one trial and one agent: planar reduction,
/// filtering, net-force estimation, decomposition, aggregation, tension, and
/// the embedded invariant checks.
ReportBundle run_report(const TrialRecord& trial, const RunConfig& config);

/// Write the bundle: category_stats.csv, circular_density.csv,
/// f_parallel_hist.csv, f_perp_hist.csv, tension_hist.csv, tension_states.csv,
/// checks.csv, provenance.json, summary.json. All writes are atomic
/// (temp + rename) and byte-deterministic for a fixed bundle/config.
void write_report(const ReportBundle& bundle, const RunConfig& config,
                  const std::string& input_path, const std::filesystem::path& out_dir);

/// Serialize the resolved config (the provenance.json "config" object).
std::string config_json(const RunConfig& config);

/// Layer a JSON config document over `config`. Unknown keys are config
/// errors; absent keys keep their current values.
void apply_config_json(RunConfig& config, const std::string& json_text);

} // namespace comanip
