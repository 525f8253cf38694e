#pragma once

#include <string>
#include <vector>

#include "comanip/geometry.hpp"
#include "comanip/trial.hpp"

namespace comanip {

enum class NetSource : unsigned char {
    Kinematic,   ///< mass * acceleration (and inertia * yaw acceleration)
    SumOfAgents, ///< planar-reduced agent wrenches summed, moments moved to the COM
    Provided,    ///< pass-through of the trial's f_net/tau_net streams
};

const char* net_source_name(NetSource s);
NetSource net_source_from_name(const std::string& name);

struct NetForceEstimate {
    CartesianVector force = CartesianVector::force(0.0, 0.0, 0.0);
    CartesianVector torque = CartesianVector::torque(0.0, 0.0, 0.0);
    NetSource source = NetSource::SumOfAgents;
    /// For Kinematic estimates: false when mass (or inertia) was absent and
    /// the vectors carry direction only, with untrusted unit magnitude.
    bool valid = true;
};

/// Net wrench stream for a whole trial. Kinematic estimates use the trial's
/// acceleration stream when present, falling back to differentiating velocity
/// and then position; yaw acceleration comes from yaw_rate or yaw the same
/// way. SumOfAgents planar-reduces every wrench against meta.gravity_axis and
/// transports grasp-point moments to the center of mass. Missing required
/// streams raise a stream-missing error naming the stream.
std::vector<NetForceEstimate> estimate_net_series(const TrialRecord& trial, NetSource source);

/// Single-sample convenience wrapper around estimate_net_series.
NetForceEstimate estimate_net(const TrialRecord& trial, std::size_t t_index, NetSource source);

/// Signed acceleration magnitude: +||a|| when the motion is speeding up
/// (dot(a,v) > 0, or starting from rest ||v|| <= v_eps), -||a|| when slowing
/// down, 0 for pure redirection (dot(a,v) == 0 while moving).
double signed_accel(const CartesianVector& a, const CartesianVector& v, double v_eps = 0.01);

} // namespace comanip
