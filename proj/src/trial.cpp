#include "comanip/trial.hpp"

#include <cmath>

namespace comanip {

namespace {

[[noreturn]] void fail_row(const std::string& what, std::size_t row) {
    throw_error(Errc::Validation, what + " at sample row " + std::to_string(row));
}

} // namespace

void TrialRecord::validate() const {
    if (meta.schema != 1) {
        throw_error(Errc::Version, "unknown trial schema version " + std::to_string(meta.schema));
    }
    if (!(meta.sample_rate_hz > 0.0) || !std::isfinite(meta.sample_rate_hz)) {
        throw_error(Errc::Validation, "meta.sample_rate_hz must be finite and positive");
    }
    if (meta.agents.empty()) {
        throw_error(Errc::Validation, "trial must declare at least one agent");
    }
    for (std::size_t i = 0; i < meta.agents.size(); ++i) {
        if (meta.agents[i].id.empty()) {
            throw_error(Errc::Validation, "agent " + std::to_string(i) + " has an empty id");
        }
        for (std::size_t j = i + 1; j < meta.agents.size(); ++j) {
            if (meta.agents[i].id == meta.agents[j].id) {
                throw_error(Errc::Validation, "duplicate agent id '" + meta.agents[i].id + "'");
            }
        }
    }
    if (meta.mass_kg && !(*meta.mass_kg > 0.0)) {
        throw_error(Errc::Validation, "meta.mass_kg must be positive");
    }
    if (meta.inertia_z && !(*meta.inertia_z > 0.0)) {
        throw_error(Errc::Validation, "meta.inertia_z must be positive");
    }
    if (std::fabs(meta.gravity_axis.norm() - 1.0) > 1e-9) {
        throw_error(Errc::Validation, "meta.gravity_axis must have unit norm");
    }

    const std::size_t n_agents = meta.agents.size();
    const double dt = 1.0 / meta.sample_rate_hz;
    const bool want_vel = !samples.empty() && samples[0].vel.has_value();
    const bool want_acc = !samples.empty() && samples[0].acc.has_value();
    const bool want_rate = !samples.empty() && samples[0].yaw_rate.has_value();
    const bool want_net = !samples.empty() && samples[0].f_net.has_value();

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const TrialSample& s = samples[i];
        if (s.force.size() != n_agents || s.torque.size() != n_agents) {
            fail_row("sample carries wrenches for " + std::to_string(s.force.size()) +
                         " agents but meta declares " + std::to_string(n_agents),
                     i);
        }
        if (!std::isfinite(s.t) || !std::isfinite(s.yaw)) fail_row("non-finite t/yaw", i);
        if (i > 0) {
            const double gap = s.t - samples[i - 1].t;
            if (!(gap > 0.0)) fail_row("timestamps not strictly increasing", i);
            if (std::fabs(gap - dt) > 0.01 * dt) {
                fail_row("timestamp jitter beyond 1% of the nominal " + std::to_string(dt) +
                             " s spacing",
                         i);
            }
        }
        if (s.vel.has_value() != want_vel) fail_row("velocity stream present only for some rows", i);
        if (s.acc.has_value() != want_acc) fail_row("acceleration stream present only for some rows", i);
        if (s.yaw_rate.has_value() != want_rate) fail_row("yaw_rate stream present only for some rows", i);
        if (s.f_net.has_value() != want_net) fail_row("f_net stream present only for some rows", i);
        if (s.yaw_rate && !std::isfinite(*s.yaw_rate)) fail_row("non-finite yaw_rate", i);
        // CartesianVector construction already rejects non-finite components;
        // unit tags are checked here so a hand-built record cannot smuggle a
        // mistagged stream through analysis.
        for (std::size_t a = 0; a < n_agents; ++a) {
            if (s.force[a].unit != Unit::Force) fail_row("force stream mistagged", i);
            if (s.torque[a].unit != Unit::Torque) fail_row("torque stream mistagged", i);
        }
        if (s.pos.unit != Unit::Position) fail_row("position stream mistagged", i);
        if (s.vel && s.vel->unit != Unit::Velocity) fail_row("velocity stream mistagged", i);
        if (s.acc && s.acc->unit != Unit::Acceleration) fail_row("acceleration stream mistagged", i);
    }
}

std::size_t TrialRecord::agent_index(const std::string& id) const {
    for (std::size_t i = 0; i < meta.agents.size(); ++i) {
        if (meta.agents[i].id == id) return i;
    }
    throw_error(Errc::Validation, "trial has no agent with id '" + id + "'");
}

bool TrialRecord::has_velocity() const {
    return !samples.empty() && samples[0].vel.has_value();
}
bool TrialRecord::has_acceleration() const {
    return !samples.empty() && samples[0].acc.has_value();
}
bool TrialRecord::has_yaw_rate() const {
    return !samples.empty() && samples[0].yaw_rate.has_value();
}
bool TrialRecord::has_provided_net() const {
    return !samples.empty() && samples[0].f_net.has_value();
}

std::vector<double> TrialRecord::timestamps() const {
    std::vector<double> t;
    t.reserve(samples.size());
    for (const auto& s : samples) t.push_back(s.t);
    return t;
}

} // namespace comanip
