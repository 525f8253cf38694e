#include "comanip/geometry.hpp"

#include <cmath>

namespace comanip {

const char* unit_name(Unit u) {
    switch (u) {
        case Unit::Force: return "force-N";
        case Unit::Torque: return "torque-N*m";
        case Unit::Position: return "position-m";
        case Unit::Velocity: return "velocity-m/s";
        case Unit::Acceleration: return "acceleration-m/s^2";
    }
    return "?";
}

const char* category_name(Category c) {
    switch (c) {
        case Category::Aligned: return "aligned";
        case Category::Acute: return "acute";
        case Category::Orthogonal: return "orthogonal";
        case Category::Obtuse: return "obtuse";
        case Category::Antagonistic: return "antagonistic";
        case Category::Indeterminate: return "indeterminate";
    }
    return "?";
}

double dot(const CartesianVector& a, const CartesianVector& b) {
    const bool ok = a.unit == b.unit ||
                    (a.unit == Unit::Force && b.unit == Unit::Position) ||
                    (a.unit == Unit::Position && b.unit == Unit::Force) ||
                    (a.unit == Unit::Acceleration && b.unit == Unit::Velocity) ||
                    (a.unit == Unit::Velocity && b.unit == Unit::Acceleration);
    if (!ok) {
        throw_error(Errc::Validation, std::string("unit mismatch in dot: ") + unit_name(a.unit) +
                                          " vs " + unit_name(b.unit));
    }
    return kernels::dot3(a.x, a.y, a.z, b.x, b.y, b.z);
}

CartesianVector cross(const CartesianVector& r, const CartesianVector& f) {
    if (!(r.unit == Unit::Position && f.unit == Unit::Force)) {
        throw_error(Errc::Validation, std::string("cross expects position x force, got ") +
                                          unit_name(r.unit) + " x " + unit_name(f.unit));
    }
    return {r.y * f.z - r.z * f.y, r.z * f.x - r.x * f.z, r.x * f.y - r.y * f.x, Unit::Torque};
}

void CategoryBands::validate() const {
    auto check = [](double w, const char* name) {
        if (!(w > 0.0 && w < 45.0)) {
            throw_error(Errc::Validation,
                        std::string(name) + " half-width must lie in (0, 45) degrees");
        }
    };
    check(aligned_halfwidth_deg, "aligned");
    check(orthogonal_halfwidth_deg, "orthogonal");
    check(antagonistic_halfwidth_deg, "antagonistic");
}

namespace {

DecompositionSample decompose_impl(const CartesianVector& self, const CartesianVector& net,
                                   double eps_net, Unit expected) {
    if (self.unit != expected || net.unit != expected) {
        throw_error(Errc::Validation,
                    std::string("decompose expects two ") + unit_name(expected) + " vectors, got " +
                        unit_name(self.unit) + " and " + unit_name(net.unit));
    }
    if (eps_net < 0.0 || !std::isfinite(eps_net)) {
        throw_error(Errc::Validation, "eps_net must be finite and >= 0");
    }

    double px, py, pz, qx, qy, qz, theta, smag;
    kernels::decompose_batch_scalar(1, &self.x, &self.y, &self.z, &net.x, &net.y, &net.z,
                                    eps_net, &px, &py, &pz, &qx, &qy, &qz, &theta, &smag);

    DecompositionSample out{CartesianVector(px, py, pz, expected),
                            CartesianVector(qx, qy, qz, expected), theta, Category::Indeterminate,
                            smag};
    if (!std::isnan(theta)) {
        out.category = classify_category(theta);
    }
    return out;
}

bool axis_aligned(const CartesianVector& g, int& axis) {
    int hits = 0;
    for (int i = 0; i < 3; ++i) {
        const double c = i == 0 ? g.x : (i == 1 ? g.y : g.z);
        if (c == 1.0 || c == -1.0) {
            axis = i;
            ++hits;
        } else if (c != 0.0) {
            return false;
        }
    }
    return hits == 1;
}

} // namespace

DecompositionSample decompose_force(const CartesianVector& f_self, const CartesianVector& f_net,
                                    double eps_net) {
    return decompose_impl(f_self, f_net, eps_net, Unit::Force);
}

DecompositionSample decompose_torque(const CartesianVector& tau_self,
                                     const CartesianVector& tau_net, double eps_net) {
    return decompose_impl(tau_self, tau_net, eps_net, Unit::Torque);
}

double angle_between(const CartesianVector& a, const CartesianVector& b) {
    if (a.unit != b.unit) {
        throw_error(Errc::Validation, std::string("angle_between unit mismatch: ") +
                                          unit_name(a.unit) + " vs " + unit_name(b.unit));
    }
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        throw_error(Errc::Geometry, "angle_between: zero-length vector has no direction");
    }
    double cosv = kernels::dot3(a.x, a.y, a.z, b.x, b.y, b.z) / (na * nb);
    if (cosv > 1.0) cosv = 1.0;
    if (cosv < -1.0) cosv = -1.0;
    return std::acos(cosv) * kernels::kDegPerRad;
}

Category classify_category(double theta_deg, const CategoryBands& bands) {
    bands.validate();
    if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
        throw_error(Errc::Validation, "theta must lie in [0, 180] degrees");
    }
    const double a = bands.aligned_halfwidth_deg;
    const double o = bands.orthogonal_halfwidth_deg;
    const double t = bands.antagonistic_halfwidth_deg;
    if (theta_deg <= a) return Category::Aligned;
    if (theta_deg < 90.0 - o) return Category::Acute;
    if (theta_deg <= 90.0 + o) return Category::Orthogonal;
    if (theta_deg < 180.0 - t) return Category::Obtuse;
    return Category::Antagonistic;
}

WrenchSample planar_reduce(const WrenchSample& wrench, const CartesianVector& gravity_axis,
                           const PlanarMask& mask) {
    const double n = gravity_axis.norm();
    if (std::fabs(n - 1.0) > 1e-9) {
        throw_error(Errc::Validation, "gravity_axis must have unit norm");
    }
    if (wrench.force.unit != Unit::Force || wrench.torque.unit != Unit::Torque) {
        throw_error(Errc::Validation, "planar_reduce expects a force+torque wrench");
    }

    WrenchSample out = wrench;
    int axis = 0;
    if (axis_aligned(gravity_axis, axis)) {
        // Exact channel masking keeps retained components bit-for-bit.
        auto zero_component = [axis](CartesianVector& v, bool along) {
            double* c[3] = {&v.x, &v.y, &v.z};
            for (int i = 0; i < 3; ++i) {
                if ((i == axis) == along) *c[i] = 0.0;
            }
        };
        if (mask.drop_axial_force) zero_component(out.force, true);
        if (mask.drop_transverse_torque) zero_component(out.torque, false);
        return out;
    }

    const double gx = gravity_axis.x, gy = gravity_axis.y, gz = gravity_axis.z;
    if (mask.drop_axial_force) {
        const double fa = kernels::dot3(out.force.x, out.force.y, out.force.z, gx, gy, gz);
        out.force = CartesianVector::force(out.force.x - fa * gx, out.force.y - fa * gy,
                                           out.force.z - fa * gz);
    }
    if (mask.drop_transverse_torque) {
        const double ta = kernels::dot3(out.torque.x, out.torque.y, out.torque.z, gx, gy, gz);
        out.torque = CartesianVector::torque(ta * gx, ta * gy, ta * gz);
    }
    return out;
}

} // namespace comanip
