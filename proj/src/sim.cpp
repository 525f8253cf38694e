#include "comanip/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"

namespace comanip::sim {

namespace {

constexpr double kGravity = 9.80665;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Standard normal for (seed, agent, step, channel), independent of the order
/// in which agents or steps are evaluated.
double counter_normal(std::uint64_t seed, std::uint64_t agent, std::uint64_t step,
                      std::uint64_t channel) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (agent + 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ (step + 0x9e3779b97f4a7c15ULL));
    h = splitmix64(h ^ (channel + 0xc2b2ae3d27d4eb4fULL));
    const std::uint64_t b1 = splitmix64(h);
    const std::uint64_t b2 = splitmix64(h ^ 0xda3e39cb94b95bdbULL);
    const double u1 = static_cast<double>((b1 >> 11) + 1) * 0x1.0p-53; // (0, 1]
    const double u2 = static_cast<double>(b2 >> 11) * 0x1.0p-53;      // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double wrap_angle(double a) {
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

PlanarWrench scripted_lookup(const std::vector<ScriptRow>& script, double t) {
    if (script.empty()) return {};
    if (t <= script.front().t) return {script.front().fx, script.front().fy, script.front().tau};
    if (t >= script.back().t) return {script.back().fx, script.back().fy, script.back().tau};
    const auto it = std::upper_bound(script.begin(), script.end(), t,
                                     [](double v, const ScriptRow& r) { return v < r.t; });
    const ScriptRow& a = *(it - 1);
    const ScriptRow& b = *it;
    const double w = (t - a.t) / (b.t - a.t);
    return {a.fx + w * (b.fx - a.fx), a.fy + w * (b.fy - a.fy), a.tau + w * (b.tau - a.tau)};
}

} // namespace

const char* policy_name(PolicyKind p) {
    switch (p) {
        case PolicyKind::LeaderWaypointPd: return "leader-waypoint-pd";
        case PolicyKind::FollowerDamper: return "follower-damper";
        case PolicyKind::FollowerProportional: return "follower-proportional";
        case PolicyKind::Scripted: return "scripted";
    }
    return "?";
}

PolicyKind policy_from_name(const std::string& name) {
    if (name == "leader-waypoint-pd") return PolicyKind::LeaderWaypointPd;
    if (name == "follower-damper") return PolicyKind::FollowerDamper;
    if (name == "follower-proportional") return PolicyKind::FollowerProportional;
    if (name == "scripted") return PolicyKind::Scripted;
    throw_error(Errc::Config, "unknown agent policy '" + name + "'");
}

void SimScenario::validate() const {
    if (!(mass_kg > 0.0)) throw_error(Errc::Config, "scenario mass must be positive");
    if (!(inertia_z > 0.0)) throw_error(Errc::Config, "scenario inertia_z must be positive");
    if (!(dt > 0.0)) throw_error(Errc::Config, "scenario dt must be positive");
    if (!(duration_s >= 0.0)) throw_error(Errc::Config, "scenario duration must be >= 0");
    if (agents.empty()) throw_error(Errc::Config, "scenario needs at least one agent");
    for (const auto& a : agents) {
        if (a.id.empty()) throw_error(Errc::Config, "agent id must not be empty");
        if (a.noise_force_std < 0.0 || a.noise_torque_std < 0.0) {
            throw_error(Errc::Config, "noise stddev must be >= 0");
        }
        if (a.policy == PolicyKind::LeaderWaypointPd && waypoints.empty()) {
            throw_error(Errc::Config,
                        "agent '" + a.id + "' uses leader-waypoint-pd but no waypoints are set");
        }
        if (a.policy == PolicyKind::Scripted) {
            for (std::size_t i = 1; i < a.params.script.size(); ++i) {
                if (!(a.params.script[i].t > a.params.script[i - 1].t)) {
                    throw_error(Errc::Config,
                                "scripted profile times must be strictly increasing");
                }
            }
        }
    }
}

PlanarWrench agent_policy(const AgentSpec& agent, const SimScenario& scenario,
                          const ObjectState& state, double t, double /*grasp_x*/,
                          double /*grasp_y*/, double grasp_vx, double grasp_vy,
                          PolicyRuntime& runtime) {
    switch (agent.policy) {
        case PolicyKind::LeaderWaypointPd: {
            const PolicyParams& p = agent.params;
            // Advance through reached waypoints, holding the last one.
            while (runtime.wp_index + 1 < scenario.waypoints.size()) {
                const Waypoint& wp = scenario.waypoints[runtime.wp_index];
                const double dx = wp.x - state.x, dy = wp.y - state.y;
                if (std::sqrt(dx * dx + dy * dy) >= p.wp_tol) break;
                ++runtime.wp_index;
            }
            const Waypoint& wp = scenario.waypoints[runtime.wp_index];
            double fx = p.kp * (wp.x - state.x) - p.kd * state.vx;
            double fy = p.kp * (wp.y - state.y) - p.kd * state.vy;
            const double fn = std::sqrt(fx * fx + fy * fy);
            if (fn > p.f_max) {
                fx *= p.f_max / fn;
                fy *= p.f_max / fn;
            }
            double tau = p.kp_yaw * wrap_angle(wp.yaw - state.yaw) - p.kd_yaw * state.yaw_rate;
            if (tau > p.tau_max) tau = p.tau_max;
            if (tau < -p.tau_max) tau = -p.tau_max;
            return {fx, fy, tau};
        }
        case PolicyKind::FollowerDamper:
            return {-agent.params.damping * grasp_vx, -agent.params.damping * grasp_vy, 0.0};
        case PolicyKind::FollowerProportional: {
            const PolicyParams& p = agent.params;
            const auto lag_steps = static_cast<std::size_t>(std::lround(p.lag_s / scenario.dt));
            const std::size_t n = runtime.accel_history_x.size();
            if (n <= lag_steps) return {}; // no estimate yet
            const double ax = runtime.accel_history_x[n - 1 - lag_steps];
            const double ay = runtime.accel_history_y[n - 1 - lag_steps];
            const double an = std::sqrt(ax * ax + ay * ay);
            if (an <= 1e-9) return {};
            return {p.gain * ax / an, p.gain * ay / an, 0.0};
        }
        case PolicyKind::Scripted:
            return scripted_lookup(agent.params.script, t);
    }
    throw_error(Errc::Config, "unhandled policy kind");
}

ObjectState step(const ObjectState& state, const std::vector<PlanarWrench>& agent_wrenches,
                 const SimScenario& scenario) {
    double fx = 0.0, fy = 0.0, tau = 0.0;
    const double c = std::cos(state.yaw), s = std::sin(state.yaw);
    for (std::size_t i = 0; i < agent_wrenches.size(); ++i) {
        const PlanarWrench& w = agent_wrenches[i];
        const double rx = c * scenario.agents[i].grasp_x - s * scenario.agents[i].grasp_y;
        const double ry = s * scenario.agents[i].grasp_x + c * scenario.agents[i].grasp_y;
        fx += w.fx;
        fy += w.fy;
        tau += rx * w.fy - ry * w.fx + w.tau;
    }
    const double ax = fx / scenario.mass_kg;
    const double ay = fy / scenario.mass_kg;
    const double alpha = tau / scenario.inertia_z;

    ObjectState next = state;
    next.vx += ax * scenario.dt;
    next.vy += ay * scenario.dt;
    next.x += next.vx * scenario.dt;
    next.y += next.vy * scenario.dt;
    next.yaw_rate += alpha * scenario.dt;
    next.yaw += next.yaw_rate * scenario.dt;
    return next;
}

SimResult run_scenario(const SimScenario& scenario) {
    scenario.validate();
    const std::size_t n_agents = scenario.agents.size();
    const auto steps = static_cast<std::size_t>(std::llround(scenario.duration_s / scenario.dt));
    const double gravity_share = -scenario.mass_kg * kGravity / static_cast<double>(n_agents);
    const std::uint64_t seed = scenario.seed.value_or(0);

    SimResult result;
    TrialRecord& trial = result.trial;
    trial.meta.study_label = "sim";
    trial.meta.trial_id = scenario.name + "-seed" + std::to_string(seed);
    trial.meta.sample_rate_hz = 1.0 / scenario.dt;
    trial.meta.mass_kg = scenario.mass_kg;
    trial.meta.inertia_z = scenario.inertia_z;
    trial.meta.gravity_axis = CartesianVector::position(0.0, 0.0, 1.0);
    for (const auto& a : scenario.agents) {
        trial.meta.agents.push_back(
            {a.id, CartesianVector::position(a.grasp_x, a.grasp_y, 0.0)});
    }
    trial.samples.reserve(steps + 1);
    result.truth.reserve(steps + 1);

    ObjectState state = scenario.initial;
    std::vector<PolicyRuntime> runtime(n_agents);
    std::vector<PlanarWrench> wrenches(n_agents);

    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * scenario.dt;
        const double cy = std::cos(state.yaw), sy = std::sin(state.yaw);

        for (std::size_t i = 0; i < n_agents; ++i) {
            const AgentSpec& a = scenario.agents[i];
            const double rx = cy * a.grasp_x - sy * a.grasp_y;
            const double ry = sy * a.grasp_x + cy * a.grasp_y;
            const double gvx = state.vx - state.yaw_rate * ry;
            const double gvy = state.vy + state.yaw_rate * rx;
            wrenches[i] = agent_policy(a, scenario, state, t, rx, ry, gvx, gvy, runtime[i]);
        }

        StepTruth truth;
        truth.t = t;
        truth.wrench = wrenches;
        for (std::size_t i = 0; i < n_agents; ++i) {
            const AgentSpec& a = scenario.agents[i];
            const double rx = cy * a.grasp_x - sy * a.grasp_y;
            const double ry = sy * a.grasp_x + cy * a.grasp_y;
            truth.fx_net += wrenches[i].fx;
            truth.fy_net += wrenches[i].fy;
            truth.tau_net += rx * wrenches[i].fy - ry * wrenches[i].fx + wrenches[i].tau;
        }
        truth.ax = truth.fx_net / scenario.mass_kg;
        truth.ay = truth.fy_net / scenario.mass_kg;
        truth.alpha = truth.tau_net / scenario.inertia_z;

        for (std::size_t i = 0; i < n_agents; ++i) {
            runtime[i].accel_history_x.push_back(truth.ax);
            runtime[i].accel_history_y.push_back(truth.ay);
        }

        TrialSample row;
        row.t = t;
        for (std::size_t i = 0; i < n_agents; ++i) {
            const AgentSpec& a = scenario.agents[i];
            double fx = wrenches[i].fx, fy = wrenches[i].fy, fz = gravity_share;
            double tx = 0.0, ty = 0.0, tz = wrenches[i].tau;
            if (a.noise_force_std > 0.0) {
                fx += a.noise_force_std * counter_normal(seed, i, k, 0);
                fy += a.noise_force_std * counter_normal(seed, i, k, 1);
                fz += a.noise_force_std * counter_normal(seed, i, k, 2);
            }
            if (a.noise_torque_std > 0.0) {
                tx += a.noise_torque_std * counter_normal(seed, i, k, 3);
                ty += a.noise_torque_std * counter_normal(seed, i, k, 4);
                tz += a.noise_torque_std * counter_normal(seed, i, k, 5);
            }
            row.force.push_back(CartesianVector::force(fx, fy, fz));
            row.torque.push_back(CartesianVector::torque(tx, ty, tz));
        }
        row.pos = CartesianVector::position(state.x, state.y, 0.0);
        row.yaw = state.yaw;
        if (scenario.emit.velocity) row.vel = CartesianVector::velocity(state.vx, state.vy, 0.0);
        if (scenario.emit.acceleration) {
            row.acc = CartesianVector::acceleration(truth.ax, truth.ay, 0.0);
        }
        if (scenario.emit.yaw_rate) row.yaw_rate = state.yaw_rate;
        if (scenario.emit.net) {
            row.f_net = CartesianVector::force(truth.fx_net, truth.fy_net, 0.0);
            row.tau_net = CartesianVector::torque(0.0, 0.0, truth.tau_net);
        }
        trial.samples.push_back(std::move(row));
        result.truth.push_back(std::move(truth));

        if (k < steps) {
            state = step(state, wrenches, scenario);
            for (double v : {state.x, state.y, state.yaw, state.vx, state.vy, state.yaw_rate}) {
                if (!(std::fabs(v) <= 1e6)) {
                    throw_error(Errc::Instability,
                                "simulation diverged at t=" + std::to_string(t) +
                                    " s: state component " + std::to_string(v));
                }
            }
        }
    }
    return result;
}

SimScenario read_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw_error(Errc::Io, "cannot open scenario file: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw_error(Errc::Parse, "malformed scenario JSON in " + path.string() + ": " + e.what());
    }

    SimScenario sc;
    try {
        sc.name = j.value("name", std::string("sim"));
        sc.mass_kg = j.value("mass_kg", sc.mass_kg);
        sc.inertia_z = j.value("inertia_z", sc.inertia_z);
        sc.dt = j.value("dt", sc.dt);
        sc.duration_s = j.value("duration_s", sc.duration_s);
        if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("initial")) {
            const auto& i = j.at("initial");
            sc.initial.x = i.value("x", 0.0);
            sc.initial.y = i.value("y", 0.0);
            sc.initial.yaw = i.value("yaw", 0.0);
            sc.initial.vx = i.value("vx", 0.0);
            sc.initial.vy = i.value("vy", 0.0);
            sc.initial.yaw_rate = i.value("yaw_rate", 0.0);
        }
        for (const auto& w : j.value("waypoints", nlohmann::json::array())) {
            sc.waypoints.push_back({w.at(0).get<double>(), w.at(1).get<double>(),
                                    w.size() > 2 ? w.at(2).get<double>() : 0.0});
        }
        if (j.contains("emit")) {
            const auto& e = j.at("emit");
            sc.emit.velocity = e.value("velocity", true);
            sc.emit.acceleration = e.value("acceleration", true);
            sc.emit.yaw_rate = e.value("yaw_rate", true);
            sc.emit.net = e.value("net", false);
        }
        for (const auto& a : j.at("agents")) {
            AgentSpec spec;
            spec.id = a.at("id").get<std::string>();
            const auto& g = a.at("grasp_offset");
            spec.grasp_x = g.at(0).get<double>();
            spec.grasp_y = g.at(1).get<double>();
            spec.policy = policy_from_name(a.at("policy").get<std::string>());
            spec.noise_force_std = a.value("noise_force_std", 0.0);
            spec.noise_torque_std = a.value("noise_torque_std", 0.0);
            if (a.contains("params")) {
                const auto& p = a.at("params");
                PolicyParams& pp = spec.params;
                pp.kp = p.value("kp", pp.kp);
                pp.kd = p.value("kd", pp.kd);
                pp.kp_yaw = p.value("kp_yaw", pp.kp_yaw);
                pp.kd_yaw = p.value("kd_yaw", pp.kd_yaw);
                pp.f_max = p.value("f_max", pp.f_max);
                pp.tau_max = p.value("tau_max", pp.tau_max);
                pp.wp_tol = p.value("wp_tol", pp.wp_tol);
                pp.damping = p.value("damping", pp.damping);
                pp.gain = p.value("gain", pp.gain);
                pp.lag_s = p.value("lag_s", pp.lag_s);
                for (const auto& r : p.value("script", nlohmann::json::array())) {
                    pp.script.push_back({r.at(0).get<double>(), r.at(1).get<double>(),
                                         r.at(2).get<double>(),
                                         r.size() > 3 ? r.at(3).get<double>() : 0.0});
                }
            }
            sc.agents.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw_error(Errc::Parse, "invalid scenario in " + path.string() + ": " + e.what());
    }
    sc.validate();
    return sc;
}

} // namespace comanip::sim
