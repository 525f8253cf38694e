#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "comanip/vec3.hpp"

namespace comanip {

/// Angular band of the agent force relative to the net force.
/// Indeterminate marks samples whose net force magnitude is below the
/// dead-band, where direction (and hence the band) is meaningless.
enum class Category : std::uint8_t {
    Aligned,
    Acute,
    Orthogonal,
    Obtuse,
    Antagonistic,
    Indeterminate,
};

const char* category_name(Category c);

/// Half-widths of the three narrow bands around 0, 90 and 180 degrees.
/// The five bands partition [0, 180] with the narrow bands owning their
/// closed boundaries:
///   Aligned      [0, a]
///   Acute        (a, 90-o)
///   Orthogonal   [90-o, 90+o]
///   Obtuse       (90+o, 180-t)
///   Antagonistic [180-t, 180]
struct CategoryBands {
    double aligned_halfwidth_deg = 5.0;
    double orthogonal_halfwidth_deg = 5.0;
    double antagonistic_halfwidth_deg = 5.0;

    void validate() const;
};

/// One agent's force (or torque) split against the net at one time instant.
/// The vectors carry the corresponding unit tag: force-tagged for a force
/// decomposition, torque-tagged for a torque decomposition.
struct DecompositionSample {
    CartesianVector parallel;      ///< projection of f_self onto f_net
    CartesianVector perpendicular; ///< f_self - parallel
    double theta_deg;              ///< angle in [0,180]; NaN when indeterminate
    Category category;
    double parallel_signed_mag;    ///< dot(f_self,f_net)/||f_net||; >0 along the net, <0 opposing

    bool determinate() const { return category != Category::Indeterminate; }
};

/// Timestamped force+torque measurement for one agent.
struct WrenchSample {
    double t;
    CartesianVector force;
    CartesianVector torque;
};

/// Which channels the planar gravity reduction drops. The default removes the
/// force along the gravity axis and the torque components perpendicular to it,
/// leaving the horizontal force plane plus the torque about the gravity axis.
struct PlanarMask {
    bool drop_axial_force = true;
    bool drop_transverse_torque = true;
};

/// Split f_self into components parallel and perpendicular to f_net.
/// The perpendicular component is the rejection f_self - parallel, so the two
/// parts always reconstruct the input; the opposite sign (parallel - f_self)
/// breaks reconstruction and fails the magnitude-plausibility bounds (pinned
/// by tests/geometry_test.cpp).
///
/// When ||f_net|| <= eps_net the direction of the net force is meaningless:
/// the sample comes back Indeterminate with zero components and theta NaN.
/// A zero f_self classifies as Orthogonal at 90 degrees: it contributes
/// nothing to the net magnitude, which is that band's defining property.
DecompositionSample decompose_force(const CartesianVector& f_self,
                                    const CartesianVector& f_net,
                                    double eps_net = 1e-9);

/// Same contract with torque-tagged inputs and outputs.
DecompositionSample decompose_torque(const CartesianVector& tau_self,
                                     const CartesianVector& tau_net,
                                     double eps_net = 1e-9);

/// Angle between two same-unit vectors in degrees, in [0, 180].
/// theta = acos(clamp(dot/(||a||*||b||), -1, 1)); the clamp absorbs rounding.
/// Zero-length input is a degenerate-direction error.
double angle_between(const CartesianVector& a, const CartesianVector& b);

/// Band for a given angle; theta outside [0,180] is a validation error.
Category classify_category(double theta_deg, const CategoryBands& bands = {});

/// Remove the gravity-attributed channels from a wrench: the force component
/// along gravity_axis and the torque components perpendicular to it.
/// gravity_axis must have unit norm (within 1e-9). Retained channels pass
/// through bit-for-bit.
WrenchSample planar_reduce(const WrenchSample& wrench, const CartesianVector& gravity_axis,
                           const PlanarMask& mask = {});

} // namespace comanip
