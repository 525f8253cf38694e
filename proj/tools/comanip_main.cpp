// comanip — batch analysis of multi-agent co-manipulation trials.
//
// Subcommands:
//   simulate   run a scenario file through the planar simulator, write a trial
//   report     decompose + analyze a trial, write the CSV/JSON report bundle
//
// Exit codes: 0 success, 1 analysis error, 2 usage/input error.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "comanip/csv.hpp"
#include "comanip/report.hpp"
#include "comanip/sim.hpp"
#include "comanip/trial_io.hpp"
#include "comanip/version.hpp"

namespace fs = std::filesystem;
using namespace comanip;

namespace {

constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

int classify_exit(const Error& e, bool loading_input) {
    if (loading_input || e.is_input_error()) return kExitUsage;
    return kExitAnalysis;
}

struct SimulateArgs {
    std::string scenario_path;
    std::string out_path;
    std::string truth_out_path;
    std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& args) {
    sim::SimScenario scenario;
    try {
        if (!fs::exists(args.scenario_path)) {
            std::cerr << "error: scenario file not found: " << args.scenario_path << "\n";
            return kExitUsage;
        }
        scenario = sim::read_scenario(args.scenario_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (args.seed) {
        scenario.seed = *args.seed;
    } else if (!scenario.seed) {
        scenario.seed = std::random_device{}();
    }
    std::cout << "seed: " << *scenario.seed << "\n";

    try {
        const sim::SimResult result = sim::run_scenario(scenario);
        io::write_trial(result.trial, args.out_path);
        std::cout << "wrote " << result.trial.samples.size() << " samples to " << args.out_path
                  << "\n";
        if (!args.truth_out_path.empty()) {
            std::string buf;
            for (const auto& tr : result.truth) {
                buf += "{\"t\":" + io::format_double(tr.t) + ",\"f\":[";
                for (std::size_t a = 0; a < tr.wrench.size(); ++a) {
                    if (a) buf += ',';
                    buf += '[' + io::format_double(tr.wrench[a].fx) + ',' +
                           io::format_double(tr.wrench[a].fy) + ',' +
                           io::format_double(tr.wrench[a].tau) + ']';
                }
                buf += "],\"f_net\":[" + io::format_double(tr.fx_net) + ',' +
                       io::format_double(tr.fy_net) + "],\"tau_net\":" +
                       io::format_double(tr.tau_net) + "}\n";
            }
            io::atomic_write_text(args.truth_out_path, buf);
            std::cout << "wrote ground truth to " << args.truth_out_path << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_exit(e, false);
    }
    return 0;
}

struct ReportArgs {
    std::vector<std::string> trial_paths;
    std::string out_dir;
    std::string config_path;
    unsigned jobs = 1;
    RunConfig config;
};

int run_report_cmd(ReportArgs& args) {
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) {
            std::cerr << "error: cannot open config file: " << args.config_path << "\n";
            return kExitUsage;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            apply_config_json(args.config, ss.str());
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    const bool single = args.trial_paths.size() == 1;
    struct Task {
        std::string path;
        std::string message;
        int exit_code = 0;
    };
    std::vector<Task> tasks;
    for (const auto& p : args.trial_paths) tasks.push_back({p, "", 0});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            Task& task = tasks[i];
            TrialRecord trial;
            try {
                trial = io::read_trial(task.path);
            } catch (const Error& e) {
                task.message = std::string("error: ") + e.what();
                task.exit_code = kExitUsage;
                continue;
            }
            try {
                const ReportBundle bundle = run_report(trial, args.config);
                const fs::path dir =
                    single ? fs::path(args.out_dir) : fs::path(args.out_dir) / bundle.trial_id;
                write_report(bundle, args.config, task.path, dir);
                task.message = "report: " + bundle.trial_id + " -> " + dir.string() +
                               (bundle.all_checks_ok() ? " (checks ok)" : " (CHECKS VIOLATED)");
            } catch (const Error& e) {
                task.message = std::string("error: ") + e.what();
                task.exit_code = classify_exit(e, false);
            }
        }
    };

    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(args.jobs, static_cast<unsigned>(tasks.size())));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    int exit_code = 0;
    for (const auto& task : tasks) {
        (task.exit_code == 0 ? std::cout : std::cerr) << task.message << "\n";
        if (task.exit_code == kExitUsage) {
            exit_code = kExitUsage;
        } else if (task.exit_code != 0 && exit_code == 0) {
            exit_code = task.exit_code;
        }
    }
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-agent co-manipulation wrench decomposition and analysis"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    SimulateArgs sim_args;
    std::uint64_t seed_flag = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario, write a trial (JSONL)");
    simulate->add_option("--scenario", sim_args.scenario_path, "scenario definition (JSON)")
        ->required();
    simulate->add_option("--out", sim_args.out_path, "output trial path (JSONL)")->required();
    simulate->add_option("--truth-out", sim_args.truth_out_path,
                         "optional ground-truth wrench/net output (JSONL)");
    CLI::Option* seed_opt =
        simulate->add_option("--seed", seed_flag, "noise seed (overrides the scenario; drawn "
                                                  "and printed when absent everywhere)");

    ReportArgs rep_args;
    std::string bands_flag;
    CLI::App* report = app.add_subcommand("report", "analyze trials, write report bundles");
    report->add_option("trials", rep_args.trial_paths, "trial file(s) (JSONL)")
        ->required()
        ->expected(-1);
    report->add_option("--out-dir", rep_args.out_dir, "output directory")->required();
    report->add_option("--agent", rep_args.config.agent_id,
                       "agent id to analyze (default: first agent)");
    report->add_option_function<std::string>(
        "--net-source",
        [&](const std::string& v) { rep_args.config.net_source = net_source_from_name(v); },
        "net force source: sum-of-agents | kinematic | provided");
    report->add_option("--eps-net", rep_args.config.eps_net,
                       "net-force dead-band in N below which samples are indeterminate");
    report->add_option("--bands", bands_flag,
                       "category band half-widths 'aligned,orthogonal,antagonistic' in degrees");
    report->add_option("--cutoff-hz", rep_args.config.filter.cutoff_hz, "low-pass cutoff");
    report->add_option("--filter-order", rep_args.config.filter.order, "low-pass order");
    report->add_option_function<std::string>(
        "--filter-method",
        [&](const std::string& v) { rep_args.config.filter.method = filter_method_from_name(v); },
        "zero-phase-butterworth | moving-average | none");
    report->add_option_function<std::string>(
        "--tension-mode",
        [&](const std::string& v) { rep_args.config.tension_mode = tension_mode_from_name(v); },
        "others | literal-net");
    report->add_option_function<double>(
        "--bin-width",
        [&](double w) {
            rep_args.config.parallel_hist.bin_width = w;
            rep_args.config.perp_hist.bin_width = w;
            rep_args.config.tension_hist.bin_width = w;
        },
        "histogram bin width in N (applies to all three histograms)");
    report->add_option("--density-bin-deg", rep_args.config.density_bin_deg,
                       "angular density bin width in degrees");
    report->add_option("--v-eps", rep_args.config.v_eps,
                       "speed dead-band in m/s for the signed acceleration");
    report->add_option("--eps-dot", rep_args.config.eps_dot,
                       "dead-band for the tension sign terms");
    report->add_option("--config", rep_args.config_path,
                       "JSON config file; its values override flags");
    report->add_option("--jobs", rep_args.jobs, "parallel trial workers")->default_val(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            if (seed_opt->count() > 0) sim_args.seed = seed_flag;
            return run_simulate(sim_args);
        }
        if (report->parsed()) {
            if (!bands_flag.empty()) {
                double a, o, t;
                char c1, c2;
                std::istringstream ss(bands_flag);
                if (!(ss >> a >> c1 >> o >> c2 >> t) || c1 != ',' || c2 != ',') {
                    std::cerr << "error: --bands expects 'A,O,T' in degrees\n";
                    return kExitUsage;
                }
                rep_args.config.bands = {a, o, t};
            }
            return run_report_cmd(rep_args);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_exit(e, false);
    }
    return 0;
}
