#include "comanip/report.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

#include "comanip/csv.hpp"
#include "comanip/differentiate.hpp"
#include "comanip/kernels.hpp"
#include "comanip/version.hpp"

namespace comanip {

namespace {

using nlohmann::json;

struct Soa3 {
    std::vector<double> x, y, z;
    void resize(std::size_t n) {
        x.resize(n);
        y.resize(n);
        z.resize(n);
    }
    void set(std::size_t i, const CartesianVector& v) {
        x[i] = v.x;
        y[i] = v.y;
        z[i] = v.z;
    }
};

double rel_denom(double v) { return v > 0.0 ? v : 1.0; }

} // namespace

void RunConfig::validate(double sample_rate_hz) const {
    if (!(eps_net >= 0.0) || !(eps_dot >= 0.0) || !(v_eps >= 0.0)) {
        throw_error(Errc::Config, "eps_net, eps_dot and v_eps must be >= 0");
    }
    bands.validate();
    filter.validate(sample_rate_hz);
    parallel_hist.validate();
    perp_hist.validate();
    tension_hist.validate();
    if (!(density_bin_deg > 0.0) ||
        std::fabs(180.0 / density_bin_deg - std::lround(180.0 / density_bin_deg)) > 1e-9) {
        throw_error(Errc::Config, "density_bin_deg must divide 180 evenly");
    }
}

bool ReportBundle::all_checks_ok() const {
    for (const auto& c : checks) {
        if (!c.ok) return false;
    }
    return true;
}

ReportBundle run_report(const TrialRecord& trial, const RunConfig& config) {
    trial.validate();
    config.validate(trial.meta.sample_rate_hz);

    const std::size_t agent =
        config.agent_id.empty() ? 0 : trial.agent_index(config.agent_id);
    const std::size_t n = trial.samples.size();
    if (n == 0) {
        throw_error(Errc::EmptyInput, "trial has no samples");
    }

    // Working copy: planar-reduced wrenches, filtered channels, kinematic
    // streams filled in (derived when absent).
    TrialRecord working = trial;
    const double rate = trial.meta.sample_rate_hz;
    {
        for (std::size_t a = 0; a < trial.meta.agents.size(); ++a) {
            std::vector<CartesianVector> f, tau;
            f.reserve(n);
            tau.reserve(n);
            for (const auto& s : working.samples) {
                const WrenchSample reduced =
                    planar_reduce({s.t, s.force[a], s.torque[a]}, trial.meta.gravity_axis);
                f.push_back(reduced.force);
                tau.push_back(reduced.torque);
            }
            f = lowpass(f, config.filter, rate);
            tau = lowpass(tau, config.filter, rate);
            for (std::size_t i = 0; i < n; ++i) {
                working.samples[i].force[a] = f[i];
                working.samples[i].torque[a] = tau[i];
            }
        }
    }

    ReportBundle bundle;
    bundle.trial_id = trial.meta.trial_id;
    bundle.agent_id = trial.meta.agents[agent].id;
    bundle.sample_count = n;

    // Kinematics: velocity and acceleration streams, derived when missing.
    const auto t = working.timestamps();
    std::vector<CartesianVector> vel, acc;
    vel.reserve(n);
    acc.reserve(n);
    if (working.has_velocity()) {
        for (const auto& s : working.samples) vel.push_back(*s.vel);
        vel = lowpass(vel, config.filter, rate);
    } else {
        std::vector<CartesianVector> pos;
        pos.reserve(n);
        for (const auto& s : working.samples) pos.push_back(s.pos);
        vel = differentiate(t, lowpass(pos, config.filter, rate), rate);
        bundle.streams.velocity_derived = true;
    }
    if (working.has_acceleration()) {
        for (const auto& s : working.samples) acc.push_back(*s.acc);
        acc = lowpass(acc, config.filter, rate);
    } else {
        acc = differentiate(t, vel, rate);
        bundle.streams.acceleration_derived = true;
    }
    bundle.streams.yaw_rate_derived = !working.has_yaw_rate();
    for (std::size_t i = 0; i < n; ++i) {
        working.samples[i].vel = vel[i];
        working.samples[i].acc = acc[i];
    }

    // Net wrench stream per the configured source.
    const auto net = estimate_net_series(working, config.net_source);

    // Batch decomposition of the chosen agent against the net force.
    Soa3 self, netf, par, perp;
    self.resize(n);
    netf.resize(n);
    par.resize(n);
    perp.resize(n);
    std::vector<double> theta(n), signed_mag(n);
    for (std::size_t i = 0; i < n; ++i) {
        self.set(i, working.samples[i].force[agent]);
        netf.set(i, net[i].force);
    }
    kernels::decompose_batch(n, self.x.data(), self.y.data(), self.z.data(), netf.x.data(),
                             netf.y.data(), netf.z.data(), config.eps_net, par.x.data(),
                             par.y.data(), par.z.data(), perp.x.data(), perp.y.data(),
                             perp.z.data(), theta.data(), signed_mag.data());

    std::vector<Category> categories(n);
    for (std::size_t i = 0; i < n; ++i) {
        categories[i] = std::isnan(theta[i]) ? Category::Indeterminate
                                             : classify_category(theta[i], config.bands);
    }

    // Per-sample kinematic magnitudes.
    Soa3 acc_soa, vel_soa;
    acc_soa.resize(n);
    vel_soa.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        acc_soa.set(i, acc[i]);
        vel_soa.set(i, vel[i]);
    }
    std::vector<double> signed_acc(n);
    kernels::signed_accel_batch(n, acc_soa.x.data(), acc_soa.y.data(), acc_soa.z.data(),
                                vel_soa.x.data(), vel_soa.y.data(), vel_soa.z.data(),
                                config.v_eps, signed_acc.data());

    CategoryStatsAccumulator stats_acc;
    for (std::size_t i = 0; i < n; ++i) {
        stats_acc.add(categories[i], kernels::norm3(acc_soa.x[i], acc_soa.y[i], acc_soa.z[i]),
                      signed_acc[i]);
    }
    bundle.category_stats = stats_acc.finish();

    // Determinate-only streams for density and component histograms.
    std::vector<double> theta_det, par_det, perp_det;
    theta_det.reserve(n);
    par_det.reserve(n);
    perp_det.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (categories[i] == Category::Indeterminate) continue;
        theta_det.push_back(theta[i]);
        par_det.push_back(signed_mag[i]);
        perp_det.push_back(kernels::norm3(perp.x[i], perp.y[i], perp.z[i]));
    }
    if (theta_det.empty()) {
        // Every sample indeterminate: emit an all-zero density rather than
        // failing the whole report.
        bundle.density.bin_deg = config.density_bin_deg;
        bundle.density.counts.assign(
            static_cast<std::size_t>(std::lround(180.0 / config.density_bin_deg)), 0);
        bundle.density.frequency.assign(bundle.density.counts.size(), 0.0);
    } else {
        bundle.density = circular_density(theta_det, config.density_bin_deg);
    }
    bundle.parallel_hist = magnitude_histogram(par_det, config.parallel_hist);
    bundle.perp_hist = magnitude_histogram(perp_det, config.perp_hist);

    // Tension series for the same agent (same net-force source).
    bundle.tension = classify_tension_series(
        working, trial.meta.agents[agent].id,
        {config.tension_mode, config.eps_dot, config.net_source});
    std::vector<double> tension_values;
    tension_values.reserve(n);
    for (const auto& ts : bundle.tension.samples) tension_values.push_back(ts.value);
    bundle.tension_hist = magnitude_histogram(tension_values, config.tension_hist);

    // Embedded invariant suite.
    {
        double recon = 0.0, ortho = 0.0, pythag = 0.0, plaus = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (categories[i] == Category::Indeterminate) continue;
            const double sx = self.x[i], sy = self.y[i], sz = self.z[i];
            const double ns = kernels::norm3(sx, sy, sz);
            const double rx = par.x[i] + perp.x[i] - sx;
            const double ry = par.y[i] + perp.y[i] - sy;
            const double rz = par.z[i] + perp.z[i] - sz;
            recon = std::max(recon, kernels::norm3(rx, ry, rz) / rel_denom(ns));
            const double d = kernels::dot3(par.x[i], par.y[i], par.z[i], perp.x[i], perp.y[i],
                                           perp.z[i]);
            ortho = std::max(ortho, std::fabs(d) / rel_denom(ns * ns));
            const double np2 = kernels::dot3(par.x[i], par.y[i], par.z[i], par.x[i], par.y[i],
                                             par.z[i]);
            const double nq2 = kernels::dot3(perp.x[i], perp.y[i], perp.z[i], perp.x[i],
                                             perp.y[i], perp.z[i]);
            pythag = std::max(pythag, std::fabs(np2 + nq2 - ns * ns) / rel_denom(ns * ns));
            const double npar = std::sqrt(np2);
            const double nperp = std::sqrt(nq2);
            plaus = std::max(plaus, (std::max(npar, nperp) - ns) / rel_denom(ns));
        }
        const double tol = 1e-9;
        bundle.checks.push_back({"decomposition_reconstruction", recon <= tol, recon, tol});
        bundle.checks.push_back({"decomposition_orthogonality", ortho <= tol, ortho, tol});
        bundle.checks.push_back({"decomposition_pythagoras", pythag <= tol, pythag, tol});
        bundle.checks.push_back({"component_magnitude_bound", plaus <= tol, plaus, tol});

        const auto part_diff = static_cast<double>(n) -
                               static_cast<double>(bundle.category_stats.total_determinate +
                                                   bundle.category_stats.indeterminate_count);
        bundle.checks.push_back({"category_partition", part_diff == 0.0, part_diff, 0.0});

        double freq_sum = 0.0;
        for (double f : bundle.density.frequency) freq_sum += f;
        const double density_err = theta_det.empty() ? 0.0 : std::fabs(freq_sum - 1.0);
        bundle.checks.push_back({"density_normalization", density_err <= 1e-9, density_err, 1e-9});

        auto conservation = [](const Histogram& h, std::size_t inputs) {
            std::size_t binned = 0;
            for (auto c : h.counts) binned += c;
            const std::size_t accounted = h.spec.policy == OverflowPolicy::DropReport
                                              ? binned + h.outliers()
                                              : binned;
            return static_cast<double>(accounted) - static_cast<double>(inputs);
        };
        const double cons = std::fabs(conservation(bundle.parallel_hist, par_det.size())) +
                            std::fabs(conservation(bundle.perp_hist, perp_det.size())) +
                            std::fabs(conservation(bundle.tension_hist, tension_values.size()));
        bundle.checks.push_back({"histogram_conservation", cons == 0.0, cons, 0.0});

        std::size_t sign_mismatches = 0;
        for (const auto& ts : bundle.tension.samples) {
            const TensionState expect = ts.value > 0.0 ? TensionState::Tension
                                        : ts.value < 0.0 ? TensionState::Compression
                                                         : TensionState::Cooperation;
            if (ts.state != expect) ++sign_mismatches;
        }
        bundle.checks.push_back({"tension_sign_structure", sign_mismatches == 0,
                                 static_cast<double>(sign_mismatches), 0.0});
    }

    return bundle;
}

namespace {

json hist_spec_json(const HistogramSpec& h) {
    return {{"bin_width", h.bin_width},
            {"lo", h.lo},
            {"hi", h.hi},
            {"policy", overflow_policy_name(h.policy)}};
}

void apply_hist_json(HistogramSpec& h, const json& j) {
    h.bin_width = j.value("bin_width", h.bin_width);
    h.lo = j.value("lo", h.lo);
    h.hi = j.value("hi", h.hi);
    if (j.contains("policy")) {
        const auto p = j["policy"].get<std::string>();
        if (p == "clip-report") {
            h.policy = OverflowPolicy::ClipReport;
        } else if (p == "drop-report") {
            h.policy = OverflowPolicy::DropReport;
        } else {
            throw_error(Errc::Config, "unknown overflow policy '" + p + "'");
        }
    }
}

json config_to_json(const RunConfig& c) {
    return {{"net_source", net_source_name(c.net_source)},
            {"eps_net", c.eps_net},
            {"bands",
             {{"aligned_halfwidth_deg", c.bands.aligned_halfwidth_deg},
              {"orthogonal_halfwidth_deg", c.bands.orthogonal_halfwidth_deg},
              {"antagonistic_halfwidth_deg", c.bands.antagonistic_halfwidth_deg}}},
            {"filter",
             {{"cutoff_hz", c.filter.cutoff_hz},
              {"order", c.filter.order},
              {"method", filter_method_name(c.filter.method)}}},
            {"tension_mode", tension_mode_name(c.tension_mode)},
            {"eps_dot", c.eps_dot},
            {"v_eps", c.v_eps},
            {"density_bin_deg", c.density_bin_deg},
            {"hist",
             {{"parallel", hist_spec_json(c.parallel_hist)},
              {"perp", hist_spec_json(c.perp_hist)},
              {"tension", hist_spec_json(c.tension_hist)}}},
            {"agent", c.agent_id}};
}

} // namespace

std::string config_json(const RunConfig& config) { return config_to_json(config).dump(2); }

void apply_config_json(RunConfig& config, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw_error(Errc::Config, std::string("malformed config JSON: ") + e.what());
    }
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "net_source") {
                config.net_source = net_source_from_name(value.get<std::string>());
            } else if (key == "eps_net") {
                config.eps_net = value.get<double>();
            } else if (key == "bands") {
                config.bands.aligned_halfwidth_deg =
                    value.value("aligned_halfwidth_deg", config.bands.aligned_halfwidth_deg);
                config.bands.orthogonal_halfwidth_deg =
                    value.value("orthogonal_halfwidth_deg", config.bands.orthogonal_halfwidth_deg);
                config.bands.antagonistic_halfwidth_deg = value.value(
                    "antagonistic_halfwidth_deg", config.bands.antagonistic_halfwidth_deg);
            } else if (key == "filter") {
                config.filter.cutoff_hz = value.value("cutoff_hz", config.filter.cutoff_hz);
                config.filter.order = value.value("order", config.filter.order);
                if (value.contains("method")) {
                    config.filter.method =
                        filter_method_from_name(value["method"].get<std::string>());
                }
            } else if (key == "tension_mode") {
                config.tension_mode = tension_mode_from_name(value.get<std::string>());
            } else if (key == "eps_dot") {
                config.eps_dot = value.get<double>();
            } else if (key == "v_eps") {
                config.v_eps = value.get<double>();
            } else if (key == "density_bin_deg") {
                config.density_bin_deg = value.get<double>();
            } else if (key == "hist") {
                if (value.contains("parallel")) apply_hist_json(config.parallel_hist, value["parallel"]);
                if (value.contains("perp")) apply_hist_json(config.perp_hist, value["perp"]);
                if (value.contains("tension")) apply_hist_json(config.tension_hist, value["tension"]);
            } else if (key == "agent") {
                config.agent_id = value.get<std::string>();
            } else {
                throw_error(Errc::Config, "unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw_error(Errc::Config, std::string("invalid config value: ") + e.what());
    }
}

void write_report(const ReportBundle& bundle, const RunConfig& config,
                  const std::string& input_path, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw_error(Errc::Io, "cannot create output directory " + out_dir.string() + ": " +
                                  ec.message());
    }

    io::export_csv(bundle.category_stats, out_dir / "category_stats.csv");
    io::export_csv(bundle.density, out_dir / "circular_density.csv");
    io::export_csv(bundle.parallel_hist, out_dir / "f_parallel_hist.csv");
    io::export_csv(bundle.perp_hist, out_dir / "f_perp_hist.csv");
    io::export_csv(bundle.tension_hist, out_dir / "tension_hist.csv");

    io::CsvTable states;
    states.header = {"state", "count", "fraction"};
    states.rows = {
        {"tension", std::to_string(bundle.tension.tension_count),
         io::format_double(bundle.tension.tension_fraction())},
        {"compression", std::to_string(bundle.tension.compression_count),
         io::format_double(bundle.tension.compression_fraction())},
        {"cooperation", std::to_string(bundle.tension.cooperation_count),
         io::format_double(bundle.tension.cooperation_fraction())},
    };
    io::write_csv(states, out_dir / "tension_states.csv");

    io::CsvTable checks;
    checks.header = {"check", "status", "observed", "threshold"};
    for (const auto& c : bundle.checks) {
        checks.rows.push_back({c.name, c.ok ? "ok" : "violated", io::format_double(c.observed),
                               io::format_double(c.threshold)});
    }
    io::write_csv(checks, out_dir / "checks.csv");

    json provenance = {{"tool", kToolName},
                       {"version", kToolVersion},
                       {"input", input_path},
                       {"trial_id", bundle.trial_id},
                       {"agent", bundle.agent_id},
                       {"net_source", net_source_name(config.net_source)},
                       {"tension_mode", tension_mode_name(config.tension_mode)},
                       {"kernel_variant", kernels::active_variant()},
                       {"config", config_to_json(config)}};
    io::atomic_write_text(out_dir / "provenance.json", provenance.dump(2) + "\n");

    // Full numeric bundle as JSON for consumers that prefer it over the CSVs.
    auto hist_json = [](const Histogram& h) {
        json bins = json::array();
        for (std::size_t k = 0; k < h.counts.size(); ++k) {
            bins.push_back({{"lo", h.spec.lo + static_cast<double>(k) * h.spec.bin_width},
                            {"hi", std::min(h.spec.hi, h.spec.lo + static_cast<double>(k + 1) *
                                                            h.spec.bin_width)},
                            {"count", h.counts[k]}});
        }
        return json{{"bins", bins},
                    {"outliers_low", h.outliers_low},
                    {"outliers_high", h.outliers_high},
                    {"policy", overflow_policy_name(h.spec.policy)}};
    };
    json table_rows = json::array();
    for (const auto& row : bundle.category_stats.rows) {
        table_rows.push_back({{"category", category_name(row.category)},
                              {"percent_time", row.percent_time},
                              {"mean_abs_accel_mps2", row.mean_abs_accel},
                              {"mean_signed_accel_mps2", row.mean_signed_accel},
                              {"sample_count", row.sample_count}});
    }
    json density_bins = json::array();
    for (std::size_t k = 0; k < bundle.density.counts.size(); ++k) {
        density_bins.push_back({{"lo_deg", static_cast<double>(k) * bundle.density.bin_deg},
                                {"hi_deg", static_cast<double>(k + 1) * bundle.density.bin_deg},
                                {"count", bundle.density.counts[k]},
                                {"frequency", bundle.density.frequency[k]}});
    }
    json report_json = {
        {"trial_id", bundle.trial_id},
        {"agent", bundle.agent_id},
        {"category_stats",
         {{"rows", table_rows},
          {"indeterminate_count", bundle.category_stats.indeterminate_count},
          {"total_determinate", bundle.category_stats.total_determinate}}},
        {"circular_density", density_bins},
        {"f_parallel_hist", hist_json(bundle.parallel_hist)},
        {"f_perp_hist", hist_json(bundle.perp_hist)},
        {"tension_hist", hist_json(bundle.tension_hist)},
        {"tension_states",
         {{"tension", {{"count", bundle.tension.tension_count},
                       {"fraction", bundle.tension.tension_fraction()}}},
          {"compression", {{"count", bundle.tension.compression_count},
                           {"fraction", bundle.tension.compression_fraction()}}},
          {"cooperation", {{"count", bundle.tension.cooperation_count},
                           {"fraction", bundle.tension.cooperation_fraction()}}}}}};
    io::atomic_write_text(out_dir / "report.json", report_json.dump(2) + "\n");

    json summary = {
        {"sample_count", bundle.sample_count},
        {"determinate_count", bundle.category_stats.total_determinate},
        {"indeterminate_count", bundle.category_stats.indeterminate_count},
        {"streams",
         {{"velocity", bundle.streams.velocity_derived ? "derived" : "recorded"},
          {"acceleration", bundle.streams.acceleration_derived ? "derived" : "recorded"},
          {"yaw_rate", bundle.streams.yaw_rate_derived ? "derived" : "recorded"}}},
        {"histogram_outliers",
         {{"f_parallel",
           {{"low", bundle.parallel_hist.outliers_low}, {"high", bundle.parallel_hist.outliers_high}}},
          {"f_perp",
           {{"low", bundle.perp_hist.outliers_low}, {"high", bundle.perp_hist.outliers_high}}},
          {"tension",
           {{"low", bundle.tension_hist.outliers_low},
            {"high", bundle.tension_hist.outliers_high}}}}},
        {"tension_states",
         {{"tension", bundle.tension.tension_count},
          {"compression", bundle.tension.compression_count},
          {"cooperation", bundle.tension.cooperation_count}}},
        {"all_checks_ok", bundle.all_checks_ok()}};
    io::atomic_write_text(out_dir / "summary.json", summary.dump(2) + "\n");
}

} // namespace comanip
