#pragma once

#include <optional>
#include <string>
#include <vector>

#include "comanip/geometry.hpp"
#include "comanip/vec3.hpp"

namespace comanip {

struct AgentMeta {
    std::string id;
    std::optional<CartesianVector> grasp_offset_body; ///< position-tagged, body frame, from COM
};

struct TrialMeta {
    int schema = 1;
    std::string study_label;
    std::string trial_id;
    double sample_rate_hz = 0.0;
    std::optional<double> mass_kg;
    std::optional<double> inertia_z;
    CartesianVector gravity_axis = CartesianVector::position(0.0, 0.0, 1.0);
    std::vector<AgentMeta> agents;
};

/// One uniformly-timestamped row: every agent's measured wrench plus the
/// object kinematics. Velocity/acceleration/yaw_rate may be absent (derived
/// downstream); f_net/tau_net carry externally provided net-wrench values for
/// the pass-through net-force source.
struct TrialSample {
    double t = 0.0;
    std::vector<CartesianVector> force;  ///< per agent, order of TrialMeta::agents
    std::vector<CartesianVector> torque; ///< per agent
    CartesianVector pos = CartesianVector::position(0.0, 0.0, 0.0);
    double yaw = 0.0;
    std::optional<CartesianVector> vel;
    std::optional<CartesianVector> acc;
    std::optional<double> yaw_rate;
    std::optional<CartesianVector> f_net;
    std::optional<CartesianVector> tau_net;
};

struct TrialRecord {
    TrialMeta meta;
    std::vector<TrialSample> samples;

    /// Full invariant check: agent stream arity, strictly increasing uniform
    /// timestamps (1% jitter budget), finite values, optional streams all-or-
    /// nothing per field. Throws on the first violation, naming field and row.
    void validate() const;

    std::size_t agent_index(const std::string& id) const;

    bool has_velocity() const;
    bool has_acceleration() const;
    bool has_yaw_rate() const;
    bool has_provided_net() const;

    std::vector<double> timestamps() const;
};

} // namespace comanip
