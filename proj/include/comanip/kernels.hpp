#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

// Batch kernels for the per-sample arithmetic that dominates trial analysis:
// force/torque decomposition against a net wrench and the signed-acceleration
// measure. A scalar reference implementation defines the semantics; an AVX2
// variant is selected at runtime when the CPU supports it and is required to
// produce bit-identical output (see tests/kernels_test.cpp).
//
// All dot products sum the three component products in magnitude order. The
// result is then a function of the *multiset* of products, which makes angles
// and norms bit-identical under every exactly representable orthogonal
// transform (axis permutations and sign flips) and under power-of-two scaling
// of either operand.

namespace comanip::kernels {

inline constexpr double kDegPerRad = 57.29577951308232; // 180/pi

/// Dot product of two 3-vectors, products summed in ascending magnitude order.
inline double dot3(double ax, double ay, double az, double bx, double by, double bz) {
    double p0 = ax * bx, p1 = ay * by, p2 = az * bz;
    if (std::fabs(p1) < std::fabs(p0)) std::swap(p0, p1);
    if (std::fabs(p2) < std::fabs(p1)) std::swap(p1, p2);
    if (std::fabs(p1) < std::fabs(p0)) std::swap(p0, p1);
    return (p0 + p1) + p2;
}

inline double norm3(double x, double y, double z) {
    return std::sqrt(dot3(x, y, z, x, y, z));
}

/// Decompose each f_self[i] into components parallel and perpendicular to
/// f_net[i]. Outputs per sample:
///   par/perp      — projection onto f_net and the rejection f_self - par
///   theta_deg     — angle between f_self and f_net in [0,180]; NaN when
///                   ||f_net|| <= eps_net (direction indeterminate); 90 when
///                   ||f_self|| == 0 (a zero force contributes nothing to the
///                   net magnitude, the defining property of the orthogonal band)
///   signed_mag    — dot(f_self,f_net)/||f_net||, NaN when indeterminate
/// Indeterminate samples get zero par/perp components.
using DecomposeFn = void (*)(std::size_t n,
                             const double* sx, const double* sy, const double* sz,
                             const double* nx, const double* ny, const double* nz,
                             double eps_net,
                             double* par_x, double* par_y, double* par_z,
                             double* perp_x, double* perp_y, double* perp_z,
                             double* theta_deg, double* signed_mag);

/// signed_accel per sample: sign(dot(a,v)) * ||a||, with +||a|| when
/// ||v|| <= v_eps (accelerating from rest always raises speed) and 0 when
/// dot(a,v) == 0 exactly while moving.
using SignedAccelFn = void (*)(std::size_t n,
                               const double* ax, const double* ay, const double* az,
                               const double* vx, const double* vy, const double* vz,
                               double v_eps, double* out);

void decompose_batch_scalar(std::size_t n,
                            const double* sx, const double* sy, const double* sz,
                            const double* nx, const double* ny, const double* nz,
                            double eps_net,
                            double* par_x, double* par_y, double* par_z,
                            double* perp_x, double* perp_y, double* perp_z,
                            double* theta_deg, double* signed_mag);

void signed_accel_batch_scalar(std::size_t n,
                               const double* ax, const double* ay, const double* az,
                               const double* vx, const double* vy, const double* vz,
                               double v_eps, double* out);

struct KernelVariant {
    const char* name;
    DecomposeFn decompose;
    SignedAccelFn signed_accel;
};

/// Variants compiled into this build that the current CPU can run.
/// Index 0 is always the scalar reference.
const std::vector<KernelVariant>& available_variants();

/// Runtime-dispatched entry points. Variant is chosen once (CPU probe,
/// overridable with COMANIP_SIMD=scalar|avx2 in the environment).
void decompose_batch(std::size_t n,
                     const double* sx, const double* sy, const double* sz,
                     const double* nx, const double* ny, const double* nz,
                     double eps_net,
                     double* par_x, double* par_y, double* par_z,
                     double* perp_x, double* perp_y, double* perp_z,
                     double* theta_deg, double* signed_mag);

void signed_accel_batch(std::size_t n,
                        const double* ax, const double* ay, const double* az,
                        const double* vx, const double* vy, const double* vz,
                        double v_eps, double* out);

/// Name of the variant the dispatcher resolved to ("scalar" or "avx2").
const char* active_variant();

} // namespace comanip::kernels
