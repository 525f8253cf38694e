#include "comanip/netforce.hpp"

#include <cmath>

#include "comanip/differentiate.hpp"

namespace comanip {

const char* net_source_name(NetSource s) {
    switch (s) {
        case NetSource::Kinematic: return "kinematic";
        case NetSource::SumOfAgents: return "sum-of-agents";
        case NetSource::Provided: return "provided";
    }
    return "?";
}

NetSource net_source_from_name(const std::string& name) {
    if (name == "kinematic") return NetSource::Kinematic;
    if (name == "sum-of-agents") return NetSource::SumOfAgents;
    if (name == "provided") return NetSource::Provided;
    throw_error(Errc::Config, "unknown net-force source '" + name + "'");
}

namespace {

CartesianVector rotate_z(const CartesianVector& v, double yaw) {
    const double c = std::cos(yaw), s = std::sin(yaw);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z, v.unit};
}

// The kinematic estimate lives in the same reduced channel set as the summed
// wrenches: the acceleration component along the gravity axis is attributed
// to gravity, not to the agents.
CartesianVector drop_axis_component(const CartesianVector& v, const CartesianVector& g) {
    if (g.x == 0.0 && g.y == 0.0 && (g.z == 1.0 || g.z == -1.0)) {
        return {v.x, v.y, 0.0, v.unit};
    }
    const double a = kernels::dot3(v.x, v.y, v.z, g.x, g.y, g.z);
    return {v.x - a * g.x, v.y - a * g.y, v.z - a * g.z, v.unit};
}

std::vector<NetForceEstimate> kinematic_series(const TrialRecord& trial) {
    const std::size_t n = trial.samples.size();
    const auto t = trial.timestamps();

    // Linear acceleration: prefer the recorded stream, else derive.
    std::vector<CartesianVector> acc;
    if (trial.has_acceleration()) {
        acc.reserve(n);
        for (const auto& s : trial.samples) acc.push_back(*s.acc);
    } else if (trial.has_velocity()) {
        std::vector<CartesianVector> vel;
        vel.reserve(n);
        for (const auto& s : trial.samples) vel.push_back(*s.vel);
        acc = differentiate(t, vel, trial.meta.sample_rate_hz);
    } else {
        std::vector<CartesianVector> pos;
        pos.reserve(n);
        for (const auto& s : trial.samples) pos.push_back(s.pos);
        if (pos.size() < 3) {
            throw_error(Errc::StreamMissing,
                        "kinematic net force needs an acceleration, velocity, or position stream "
                        "of at least 3 samples");
        }
        acc = differentiate(t, differentiate(t, pos, trial.meta.sample_rate_hz),
                            trial.meta.sample_rate_hz);
    }

    // Yaw acceleration from the recorded rate when present, else from yaw.
    std::vector<double> yaw_acc;
    {
        std::vector<double> rate;
        if (trial.has_yaw_rate()) {
            rate.reserve(n);
            for (const auto& s : trial.samples) rate.push_back(*s.yaw_rate);
        } else {
            std::vector<double> yaw;
            yaw.reserve(n);
            for (const auto& s : trial.samples) yaw.push_back(s.yaw);
            rate = differentiate(t, yaw, trial.meta.sample_rate_hz);
        }
        yaw_acc = differentiate(t, rate, trial.meta.sample_rate_hz);
    }

    const bool has_mass = trial.meta.mass_kg.has_value();
    const bool has_inertia = trial.meta.inertia_z.has_value();
    const double mass = has_mass ? *trial.meta.mass_kg : 1.0;
    const double inertia = has_inertia ? *trial.meta.inertia_z : 1.0;
    const CartesianVector axis = trial.meta.gravity_axis;

    std::vector<NetForceEstimate> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        NetForceEstimate e;
        e.source = NetSource::Kinematic;
        e.valid = has_mass && has_inertia;
        const CartesianVector a_planar = drop_axis_component(acc[i], axis);
        if (has_mass) {
            e.force = (a_planar * mass).retag(Unit::Force);
        } else {
            const double na = a_planar.norm();
            e.force = na == 0.0 ? CartesianVector::force(0.0, 0.0, 0.0)
                                : (a_planar / na).retag(Unit::Force);
        }
        const double alpha = yaw_acc[i];
        const double tz = has_inertia ? inertia * alpha : (alpha > 0.0 ? 1.0 : (alpha < 0.0 ? -1.0 : 0.0));
        e.torque = (axis * tz).retag(Unit::Torque);
        out.push_back(e);
    }
    return out;
}

std::vector<NetForceEstimate> sum_series(const TrialRecord& trial) {
    const std::size_t n = trial.samples.size();
    const std::size_t n_agents = trial.meta.agents.size();

    std::vector<CartesianVector> offsets;
    offsets.reserve(n_agents);
    for (const auto& a : trial.meta.agents) {
        if (!a.grasp_offset_body) {
            throw_error(Errc::StreamMissing, "agent '" + a.id +
                                                 "' has no grasp offset; required to transport "
                                                 "moments to the center of mass");
        }
        offsets.push_back(*a.grasp_offset_body);
    }

    std::vector<NetForceEstimate> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const TrialSample& s = trial.samples[i];
        CartesianVector f_net = CartesianVector::force(0.0, 0.0, 0.0);
        CartesianVector tau_net = CartesianVector::torque(0.0, 0.0, 0.0);
        for (std::size_t a = 0; a < n_agents; ++a) {
            const WrenchSample reduced = planar_reduce({s.t, s.force[a], s.torque[a]},
                                                       trial.meta.gravity_axis);
            const CartesianVector r = rotate_z(offsets[a], s.yaw);
            f_net += reduced.force;
            tau_net += cross(r, reduced.force) + reduced.torque;
        }
        out.push_back({f_net, tau_net, NetSource::SumOfAgents, true});
    }
    return out;
}

std::vector<NetForceEstimate> provided_series(const TrialRecord& trial) {
    if (!trial.has_provided_net()) {
        throw_error(Errc::StreamMissing, "trial carries no f_net/tau_net stream for the "
                                         "'provided' net-force source");
    }
    std::vector<NetForceEstimate> out;
    out.reserve(trial.samples.size());
    for (const auto& s : trial.samples) {
        const CartesianVector tau =
            s.tau_net ? *s.tau_net : CartesianVector::torque(0.0, 0.0, 0.0);
        out.push_back({*s.f_net, tau, NetSource::Provided, true});
    }
    return out;
}

} // namespace

std::vector<NetForceEstimate> estimate_net_series(const TrialRecord& trial, NetSource source) {
    switch (source) {
        case NetSource::Kinematic: return kinematic_series(trial);
        case NetSource::SumOfAgents: return sum_series(trial);
        case NetSource::Provided: return provided_series(trial);
    }
    throw_error(Errc::Config, "unhandled net-force source");
}

NetForceEstimate estimate_net(const TrialRecord& trial, std::size_t t_index, NetSource source) {
    if (t_index >= trial.samples.size()) {
        throw_error(Errc::Validation, "sample index " + std::to_string(t_index) +
                                          " out of range for trial of " +
                                          std::to_string(trial.samples.size()) + " samples");
    }
    return estimate_net_series(trial, source)[t_index];
}

double signed_accel(const CartesianVector& a, const CartesianVector& v, double v_eps) {
    if (a.unit != Unit::Acceleration || v.unit != Unit::Velocity) {
        throw_error(Errc::Validation, "signed_accel expects (acceleration, velocity)");
    }
    double out;
    kernels::signed_accel_batch_scalar(1, &a.x, &a.y, &a.z, &v.x, &v.y, &v.z, v_eps, &out);
    return out;
}

} // namespace comanip
