#pragma once

#include <string>
#include <vector>

#include "comanip/netforce.hpp"
#include "comanip/trial.hpp"

namespace comanip {

enum class TensionState : unsigned char { Tension, Compression, Cooperation };

const char* tension_state_name(TensionState s);

/// Which force stands in for "the rest of the group" in the tension measure.
/// Others (default) uses f_net - f_self: the forces applied by everyone else,
/// which keeps the measure meaningful for balanced static tension where the
/// net force vanishes. LiteralNet uses f_net itself and is retained for
/// comparison runs; the mode is always recorded in output metadata.
enum class TensionMode : unsigned char { Others, LiteralNet };

const char* tension_mode_name(TensionMode m);
TensionMode tension_mode_from_name(const std::string& name);

struct TensionSample {
    double value = 0.0; ///< signed magnitude, N: >0 tension, <0 compression
    TensionState state = TensionState::Cooperation;
    CartesianVector midpoint = CartesianVector::position(0.0, 0.0, 0.0); ///< from COM
    CartesianVector p0 = CartesianVector::position(0.0, 0.0, 0.0);      ///< midpoint -> grasp
    CartesianVector p_net = CartesianVector::position(0.0, 0.0, 0.0);   ///< midpoint -> COM
};

/// Signed tension/compression between one agent and the rest of the group.
///
/// Geometry: midpoint = grasp_pos/2 between the center of mass and the grasp
/// point; P0 runs from the midpoint to the grasp, P_net from the midpoint to
/// the COM (so P0 = -P_net). The sign term averages sgn(f0 . P0) and
/// sgn(f_other . P_net), each zeroed inside the eps_dot dead-band: +1 when
/// both sides pull apart (tension), -1 when both push together (compression),
/// 0 when they drive the same way (cooperation). The magnitude is the smaller
/// force's component along its position vector; ties pick f0.
///
/// Inputs are expected planar-reduced; grasp_pos is the agent's grasp point
/// relative to the center of mass and must be nonzero.
TensionSample tension_value(const CartesianVector& f_self, const CartesianVector& f_net,
                            const CartesianVector& grasp_pos,
                            TensionMode mode = TensionMode::Others, double eps_dot = 1e-9);

struct TensionSeries {
    std::vector<TensionSample> samples;
    std::size_t tension_count = 0;
    std::size_t compression_count = 0;
    std::size_t cooperation_count = 0;

    double tension_fraction() const;
    double compression_fraction() const;
    double cooperation_fraction() const;
};

struct TensionConfig {
    TensionMode mode = TensionMode::Others;
    double eps_dot = 1e-9;
    NetSource net_source = NetSource::SumOfAgents;
};

/// Per-sample tension for one agent over a whole trial, plus the time
/// fractions spent in each state (count-in-state / total samples). Wrenches
/// are planar-reduced against the trial's gravity axis and the grasp position
/// tracks the object yaw. Missing grasp geometry is a stream-missing error.
TensionSeries classify_tension_series(const TrialRecord& trial, const std::string& agent_id,
                                      const TensionConfig& config = {});

} // namespace comanip
