#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "comanip/trial.hpp"

namespace comanip::sim {

/// Planar rigid-body state: position and yaw with their rates.
struct ObjectState {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double yaw_rate = 0.0;
};

/// Force in the world frame applied at an agent's grasp point, plus a couple
/// about the vertical axis.
struct PlanarWrench {
    double fx = 0.0;
    double fy = 0.0;
    double tau = 0.0;
};

enum class PolicyKind : unsigned char {
    LeaderWaypointPd,    ///< PD pull toward the current waypoint, saturated
    FollowerDamper,      ///< resists its grasp-point velocity
    FollowerProportional,///< pushes along the lagged acceleration direction
    Scripted,            ///< table lookup with linear interpolation
};

const char* policy_name(PolicyKind p);
PolicyKind policy_from_name(const std::string& name);

struct ScriptRow {
    double t = 0.0;
    double fx = 0.0;
    double fy = 0.0;
    double tau = 0.0;
};

struct PolicyParams {
    // leader-waypoint-pd
    double kp = 60.0;
    double kd = 70.0;
    double kp_yaw = 8.0;
    double kd_yaw = 6.0;
    double f_max = 120.0;
    double tau_max = 40.0;
    double wp_tol = 0.05; ///< m; advance to the next waypoint inside this radius

    // follower-damper
    double damping = 25.0; ///< N*s/m against the grasp-point velocity

    // follower-proportional
    double gain = 20.0;  ///< N along the lagged acceleration direction
    double lag_s = 0.2;

    // scripted
    std::vector<ScriptRow> script;
};

struct AgentSpec {
    std::string id;
    double grasp_x = 0.0; ///< body-frame offset from the center of mass, m
    double grasp_y = 0.0;
    PolicyKind policy = PolicyKind::FollowerDamper;
    PolicyParams params;
    double noise_force_std = 0.0;  ///< N, per sensed force channel
    double noise_torque_std = 0.0; ///< N*m, per sensed torque channel
};

struct Waypoint {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
};

struct EmitOptions {
    bool velocity = true;
    bool acceleration = true;
    bool yaw_rate = true;
    bool net = false; ///< write the true net wrench into f_net/tau_net
};

struct SimScenario {
    std::string name = "sim";
    double mass_kg = 20.0;
    double inertia_z = 5.0;
    double dt = 0.005; ///< 200 Hz
    double duration_s = 30.0;
    std::optional<std::uint64_t> seed; ///< run_scenario treats absent as 0
    ObjectState initial{};
    std::vector<Waypoint> waypoints;
    std::vector<AgentSpec> agents;
    EmitOptions emit{};

    void validate() const;
};

/// Mutable per-agent execution state (waypoint progress, lagged-acceleration
/// history). One instance per agent per run.
struct PolicyRuntime {
    std::size_t wp_index = 0;
    std::vector<double> accel_history_x;
    std::vector<double> accel_history_y;
};

/// Evaluate one agent's policy for the current state. grasp_* give the
/// world-frame grasp offset from the COM and the grasp-point velocity.
PlanarWrench agent_policy(const AgentSpec& agent, const SimScenario& scenario,
                          const ObjectState& state, double t, double grasp_x, double grasp_y,
                          double grasp_vx, double grasp_vy, PolicyRuntime& runtime);

/// One semi-implicit Euler step under the given world-frame grasp wrenches:
/// v += (sum f / m) dt; x += v dt; likewise for yaw with moments taken about
/// the center of mass (r x f + tau, r the world-frame grasp offset).
ObjectState step(const ObjectState& state, const std::vector<PlanarWrench>& agent_wrenches,
                 const SimScenario& scenario);

/// Exact per-step ground truth kept alongside the emitted (sensed) trial.
struct StepTruth {
    double t = 0.0;
    std::vector<PlanarWrench> wrench; ///< true agent wrenches, world frame
    double fx_net = 0.0;
    double fy_net = 0.0;
    double tau_net = 0.0; ///< about the COM
    double ax = 0.0;
    double ay = 0.0;
    double alpha = 0.0;
};

struct SimResult {
    TrialRecord trial;
    std::vector<StepTruth> truth;
};

/// Run a scenario to completion. Deterministic: identical (scenario, seed)
/// produce identical results bit-for-bit. Sensed wrenches add the constant
/// vertical gravity share -(m g / n_agents) plus seeded Gaussian noise from a
/// counter-based generator, so per-agent streams do not depend on agent
/// iteration order; zero noise stddev leaves the true values untouched.
/// Any state component beyond 1e6 aborts with an instability error.
SimResult run_scenario(const SimScenario& scenario);

/// Load a scenario definition (JSON, documented in docs/formats.md).
SimScenario read_scenario(const std::filesystem::path& path);

} // namespace comanip::sim
