#include "comanip/tension.hpp"

#include <cmath>

namespace comanip {

const char* tension_state_name(TensionState s) {
    switch (s) {
        case TensionState::Tension: return "tension";
        case TensionState::Compression: return "compression";
        case TensionState::Cooperation: return "cooperation";
    }
    return "?";
}

const char* tension_mode_name(TensionMode m) {
    switch (m) {
        case TensionMode::Others: return "others";
        case TensionMode::LiteralNet: return "literal-net";
    }
    return "?";
}

TensionMode tension_mode_from_name(const std::string& name) {
    if (name == "others") return TensionMode::Others;
    if (name == "literal-net") return TensionMode::LiteralNet;
    throw_error(Errc::Config, "unknown tension mode '" + name + "'");
}

namespace {

int sgn_eps(double x, double eps) {
    if (std::fabs(x) <= eps) return 0;
    return x > 0.0 ? 1 : -1;
}

CartesianVector rotate_z(const CartesianVector& v, double yaw) {
    const double c = std::cos(yaw), s = std::sin(yaw);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z, v.unit};
}

} // namespace

TensionSample tension_value(const CartesianVector& f_self, const CartesianVector& f_net,
                            const CartesianVector& grasp_pos, TensionMode mode, double eps_dot) {
    if (f_self.unit != Unit::Force || f_net.unit != Unit::Force) {
        throw_error(Errc::Validation, "tension_value expects force-tagged f_self and f_net");
    }
    if (grasp_pos.unit != Unit::Position) {
        throw_error(Errc::Validation, "tension_value expects a position-tagged grasp point");
    }
    if (grasp_pos.norm() == 0.0) {
        throw_error(Errc::Geometry,
                    "grasp point coincides with the center of mass; tension geometry undefined");
    }
    if (eps_dot < 0.0 || !std::isfinite(eps_dot)) {
        throw_error(Errc::Validation, "eps_dot must be finite and >= 0");
    }

    TensionSample out;
    out.midpoint = grasp_pos * 0.5;
    out.p0 = grasp_pos - out.midpoint;
    out.p_net = -out.midpoint;

    const CartesianVector f_other =
        mode == TensionMode::Others ? f_net - f_self : f_net;

    const int s0 = sgn_eps(dot(f_self, out.p0), eps_dot);
    const int s1 = sgn_eps(dot(f_other, out.p_net), eps_dot);
    const double sign_term = (s0 + s1) / 2.0;

    const bool self_is_min = f_self.norm() <= f_other.norm(); // tie -> f0
    const CartesianVector& f_min = self_is_min ? f_self : f_other;
    const CartesianVector& p_min = self_is_min ? out.p0 : out.p_net;

    out.value = std::fabs(dot(f_min, p_min) / p_min.norm()) * sign_term;
    out.state = out.value > 0.0 ? TensionState::Tension
                                : (out.value < 0.0 ? TensionState::Compression
                                                   : TensionState::Cooperation);
    return out;
}

double TensionSeries::tension_fraction() const {
    const std::size_t n = samples.size();
    return n == 0 ? 0.0 : static_cast<double>(tension_count) / static_cast<double>(n);
}
double TensionSeries::compression_fraction() const {
    const std::size_t n = samples.size();
    return n == 0 ? 0.0 : static_cast<double>(compression_count) / static_cast<double>(n);
}
double TensionSeries::cooperation_fraction() const {
    const std::size_t n = samples.size();
    return n == 0 ? 0.0 : static_cast<double>(cooperation_count) / static_cast<double>(n);
}

TensionSeries classify_tension_series(const TrialRecord& trial, const std::string& agent_id,
                                      const TensionConfig& config) {
    const std::size_t agent = trial.agent_index(agent_id);
    if (!trial.meta.agents[agent].grasp_offset_body) {
        throw_error(Errc::StreamMissing,
                    "agent '" + agent_id + "' has no grasp offset; tension geometry undefined");
    }
    const CartesianVector offset = *trial.meta.agents[agent].grasp_offset_body;
    const auto net = estimate_net_series(trial, config.net_source);

    TensionSeries series;
    series.samples.reserve(trial.samples.size());
    for (std::size_t i = 0; i < trial.samples.size(); ++i) {
        const TrialSample& s = trial.samples[i];
        const WrenchSample reduced =
            planar_reduce({s.t, s.force[agent], s.torque[agent]}, trial.meta.gravity_axis);
        const CartesianVector grasp = rotate_z(offset, s.yaw);
        const TensionSample ts =
            tension_value(reduced.force, net[i].force, grasp, config.mode, config.eps_dot);
        switch (ts.state) {
            case TensionState::Tension: ++series.tension_count; break;
            case TensionState::Compression: ++series.compression_count; break;
            case TensionState::Cooperation: ++series.cooperation_count; break;
        }
        series.samples.push_back(ts);
    }
    return series;
}

} // namespace comanip
