#pragma once

#include <cmath>
#include <string>

#include "comanip/errors.hpp"
#include "comanip/kernels.hpp"

namespace comanip {

/// Semantic unit carried by a CartesianVector. Arithmetic between vectors is
/// checked against a small compatibility table; mixing incompatible units is
/// a construction/operation-time error, not a silent reinterpretation.
enum class Unit : unsigned char {
    Force,        // N
    Torque,       // N*m
    Position,     // m
    Velocity,     // m/s
    Acceleration, // m/s^2
};

const char* unit_name(Unit u);

/// 3-component vector with a semantic unit tag. Components must be finite;
/// construction rejects NaN/inf.
struct CartesianVector {
    double x;
    double y;
    double z;
    Unit unit;

    CartesianVector(double x_, double y_, double z_, Unit unit_) : x(x_), y(y_), z(z_), unit(unit_) {
        if (!(std::isfinite(x_) && std::isfinite(y_) && std::isfinite(z_))) {
            throw_error(Errc::Validation,
                        std::string("non-finite ") + unit_name(unit_) + " vector component");
        }
    }

    static CartesianVector force(double x, double y, double z) { return {x, y, z, Unit::Force}; }
    static CartesianVector torque(double x, double y, double z) { return {x, y, z, Unit::Torque}; }
    static CartesianVector position(double x, double y, double z) { return {x, y, z, Unit::Position}; }
    static CartesianVector velocity(double x, double y, double z) { return {x, y, z, Unit::Velocity}; }
    static CartesianVector acceleration(double x, double y, double z) { return {x, y, z, Unit::Acceleration}; }
    static CartesianVector zero(Unit u) { return {0.0, 0.0, 0.0, u}; }

    CartesianVector operator+(const CartesianVector& o) const {
        require_same(o, "+");
        return {x + o.x, y + o.y, z + o.z, unit};
    }
    CartesianVector operator-(const CartesianVector& o) const {
        require_same(o, "-");
        return {x - o.x, y - o.y, z - o.z, unit};
    }
    CartesianVector operator*(double s) const { return {x * s, y * s, z * s, unit}; }
    CartesianVector operator/(double s) const { return {x / s, y / s, z / s, unit}; }
    CartesianVector operator-() const { return {-x, -y, -z, unit}; }
    friend CartesianVector operator*(double s, const CartesianVector& v) { return v * s; }

    CartesianVector& operator+=(const CartesianVector& o) { return *this = *this + o; }
    CartesianVector& operator-=(const CartesianVector& o) { return *this = *this - o; }

    double norm() const { return kernels::norm3(x, y, z); }
    double norm_sq() const { return kernels::dot3(x, y, z, x, y, z); }

    /// Unit-magnitude vector in the same direction (same tag). Throws on a
    /// zero-length input.
    CartesianVector normalized() const {
        const double n = norm();
        if (n == 0.0) {
            throw_error(Errc::Geometry,
                        std::string("cannot normalize zero-length ") + unit_name(unit) + " vector");
        }
        return *this / n;
    }

    /// Same components under a different semantic tag (an explicit, visible
    /// reinterpretation; e.g. a normalized acceleration reused as a net-force
    /// direction).
    CartesianVector retag(Unit u) const { return {x, y, z, u}; }

    bool same_components(const CartesianVector& o) const {
        return x == o.x && y == o.y && z == o.z;
    }

private:
    void require_same(const CartesianVector& o, const char* op) const {
        if (unit != o.unit) {
            throw_error(Errc::Validation, std::string("unit mismatch in '") + op + "': " +
                                              unit_name(unit) + " vs " + unit_name(o.unit));
        }
    }
};

/// Dot product. Allowed between equal tags, force·position (work-like terms in
/// the tension measure) and acceleration·velocity (speed-change rate).
double dot(const CartesianVector& a, const CartesianVector& b);

/// Moment of a force about the origin of the position vector: position x force -> torque.
CartesianVector cross(const CartesianVector& r, const CartesianVector& f);

} // namespace comanip
