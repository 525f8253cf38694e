#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <string>

#include "comanip/report.hpp"
#include "comanip/trial_io.hpp"
#include "helpers.hpp"

using namespace comanip;

namespace {

const std::string kCli = COMANIP_CLI_PATH;
const std::filesystem::path kScenario =
    std::filesystem::path(COMANIP_SOURCE_DIR) / "scenarios" / "leader_follower.json";

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

TEST_CASE("cli simulate") {
    const auto dir = testutil::scratch_dir("cli-sim");
    SUBCASE("deterministic output for a fixed seed") {
        const auto a = dir / "a.jsonl";
        const auto b = dir / "b.jsonl";
        CHECK(run(kCli + " simulate --scenario " + kScenario.string() + " --seed 7 --out " +
                  a.string() + " > /dev/null") == 0);
        CHECK(run(kCli + " simulate --scenario " + kScenario.string() + " --seed 7 --out " +
                  b.string() + " > /dev/null") == 0);
        CHECK(testutil::slurp(a) == testutil::slurp(b));
        CHECK(!testutil::slurp(a).empty());
    }
    SUBCASE("missing scenario file exits 2 and names the path") {
        const auto out = dir / "cap.txt";
        const int rc = run(kCli + " simulate --scenario " + (dir / "nope.json").string() +
                           " --out " + (dir / "x.jsonl").string() + " 2> " + out.string());
        CHECK(rc == 2);
        CHECK(testutil::slurp(out).find("nope.json") != std::string::npos);
    }
    SUBCASE("optional ground-truth output carries one row per sample") {
        const auto trial = dir / "gt.jsonl";
        const auto truth = dir / "truth.jsonl";
        CHECK(run(kCli + " simulate --scenario " + kScenario.string() + " --seed 5 --out " +
                  trial.string() + " --truth-out " + truth.string() + " > /dev/null") == 0);
        const auto trial_text = testutil::slurp(trial);
        const auto truth_text = testutil::slurp(truth);
        const auto count_lines = [](const std::string& s) {
            return std::count(s.begin(), s.end(), '\n');
        };
        CHECK(count_lines(trial_text) == count_lines(truth_text) + 1); // meta line
        CHECK(truth_text.find("\"f_net\"") != std::string::npos);
    }
    SUBCASE("omitted seed is drawn and printed") {
        // scenario without a seed field
        const auto sc = dir / "noseed.json";
        std::ofstream(sc) << R"({"duration_s": 0.1, "agents": [
            {"id": "a", "grasp_offset": [0.5, 0.0], "policy": "follower-damper"}]})";
        const auto cap = dir / "out.txt";
        CHECK(run(kCli + " simulate --scenario " + sc.string() + " --out " +
                  (dir / "t.jsonl").string() + " > " + cap.string()) == 0);
        CHECK(testutil::slurp(cap).find("seed: ") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli report") {
    const auto dir = testutil::scratch_dir("cli-rep");
    const auto trial = dir / "t.jsonl";
    REQUIRE(run(kCli + " simulate --scenario " + kScenario.string() + " --seed 3 --out " +
                trial.string() + " > /dev/null") == 0);

    SUBCASE("bundle files exist and runs are byte-identical") {
        const auto r1 = dir / "r1";
        const auto r2 = dir / "r2";
        CHECK(run(kCli + " report " + trial.string() + " --out-dir " + r1.string() +
                  " > /dev/null") == 0);
        CHECK(run(kCli + " report " + trial.string() + " --out-dir " + r2.string() +
                  " > /dev/null") == 0);
        for (const char* name :
             {"category_stats.csv", "circular_density.csv", "f_parallel_hist.csv",
              "f_perp_hist.csv", "tension_hist.csv", "tension_states.csv", "checks.csv",
              "provenance.json", "summary.json", "report.json"}) {
            INFO(name);
            REQUIRE(std::filesystem::exists(r1 / name));
            CHECK(testutil::slurp(r1 / name) == testutil::slurp(r2 / name));
        }
        // clean sim input: the embedded invariant suite passes
        CHECK(testutil::slurp(r1 / "checks.csv").find("violated") == std::string::npos);
    }
    SUBCASE("tension mode changes the states file and is recorded in provenance") {
        const auto ra = dir / "others";
        const auto rb = dir / "literal";
        CHECK(run(kCli + " report " + trial.string() + " --out-dir " + ra.string() +
                  " > /dev/null") == 0);
        CHECK(run(kCli + " report " + trial.string() + " --tension-mode literal-net --out-dir " +
                  rb.string() + " > /dev/null") == 0);
        CHECK(testutil::slurp(ra / "tension_states.csv") !=
              testutil::slurp(rb / "tension_states.csv"));
        CHECK(testutil::slurp(ra / "provenance.json").find("\"tension_mode\": \"others\"") !=
              std::string::npos);
        CHECK(testutil::slurp(rb / "provenance.json").find("\"tension_mode\": \"literal-net\"") !=
              std::string::npos);
    }
    SUBCASE("config file overrides flags") {
        const auto cfg = dir / "cfg.json";
        std::ofstream(cfg) << R"({"eps_net": 2.5})";
        const auto out = dir / "cfged";
        CHECK(run(kCli + " report " + trial.string() + " --eps-net 1.0 --config " + cfg.string() +
                  " --out-dir " + out.string() + " > /dev/null") == 0);
        CHECK(testutil::slurp(out / "provenance.json").find("\"eps_net\": 2.5") !=
              std::string::npos);
    }
    SUBCASE("unknown agent id is an analysis error (exit 1)") {
        CHECK(run(kCli + " report " + trial.string() + " --agent ghost --out-dir " +
                  (dir / "ghost").string() + " 2> /dev/null") == 1);
    }
    SUBCASE("malformed trial file exits 2") {
        const auto bad = dir / "bad.jsonl";
        std::ofstream(bad) << "not json\n";
        CHECK(run(kCli + " report " + bad.string() + " --out-dir " + (dir / "badrep").string() +
                  " 2> /dev/null") == 2);
    }
    SUBCASE("multiple trials land in per-trial directories, in parallel") {
        const auto t2 = dir / "t2.jsonl";
        REQUIRE(run(kCli + " simulate --scenario " + kScenario.string() + " --seed 4 --out " +
                    t2.string() + " > /dev/null") == 0);
        const auto multi = dir / "multi";
        CHECK(run(kCli + " report " + trial.string() + " " + t2.string() + " --jobs 2 --out-dir " +
                  multi.string() + " > /dev/null") == 0);
        CHECK(std::filesystem::exists(multi / "leader-follower-seed3" / "category_stats.csv"));
        CHECK(std::filesystem::exists(multi / "leader-follower-seed4" / "category_stats.csv"));
    }
    SUBCASE("usage errors exit 2") {
        CHECK(run(kCli + " report --out-dir /tmp/x 2> /dev/null") == 2); // no trial
        CHECK(run(kCli + " frobnicate 2> /dev/null") == 2);              // no such subcommand
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_report library-level sanity on a hand-built trial") {
    auto trial = testutil::two_agent_trial(600);
    const double rate = trial.meta.sample_rate_hz;
    for (std::size_t i = 0; i < trial.samples.size(); ++i) {
        const double t = static_cast<double>(i) / rate;
        const double f = 20.0 * std::sin(2.0 * std::numbers::pi * 0.4 * t);
        trial.samples[i].force[0] = CartesianVector::force(f, 0, -98.0);
        trial.samples[i].force[1] = CartesianVector::force(0.5 * f, 0, -98.0);
        trial.samples[i].acc =
            CartesianVector::acceleration(1.5 * f / *trial.meta.mass_kg, 0, 0);
        trial.samples[i].vel = CartesianVector::velocity(
            -1.5 * 20.0 / (*trial.meta.mass_kg * 2.0 * std::numbers::pi * 0.4) *
                std::cos(2.0 * std::numbers::pi * 0.4 * t),
            0, 0);
    }
    RunConfig cfg;
    cfg.filter.method = FilterMethod::None;
    const auto bundle = run_report(trial, cfg);
    CHECK(bundle.all_checks_ok());
    CHECK(bundle.sample_count == 600);
    CHECK(bundle.agent_id == "a0");
    // both agents push the same way: the chosen agent is aligned when the
    // net force is strong enough to classify
    CHECK(bundle.category_stats.rows[0].sample_count > 0);
    CHECK(bundle.streams.velocity_derived == false);
}
