#include "comanip/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace comanip::kernels {

#if defined(COMANIP_HAVE_AVX2_TU)
// Defined in kernels_avx2.cpp (compiled with -mavx2 on x86_64 builds only).
void decompose_batch_avx2(std::size_t n,
                          const double* sx, const double* sy, const double* sz,
                          const double* nx, const double* ny, const double* nz,
                          double eps_net,
                          double* par_x, double* par_y, double* par_z,
                          double* perp_x, double* perp_y, double* perp_z,
                          double* theta_deg, double* signed_mag);
void signed_accel_batch_avx2(std::size_t n,
                             const double* ax, const double* ay, const double* az,
                             const double* vx, const double* vy, const double* vz,
                             double v_eps, double* out);
#endif

namespace {

std::vector<KernelVariant> probe_variants() {
    std::vector<KernelVariant> v;
    v.push_back({"scalar", &decompose_batch_scalar, &signed_accel_batch_scalar});
#if defined(COMANIP_HAVE_AVX2_TU)
    if (__builtin_cpu_supports("avx2")) {
        v.push_back({"avx2", &decompose_batch_avx2, &signed_accel_batch_avx2});
    }
#endif
    return v;
}

const KernelVariant& chosen() {
    static const KernelVariant sel = [] {
        const auto& all = available_variants();
        if (const char* req = std::getenv("COMANIP_SIMD")) {
            for (const auto& k : all) {
                if (std::strcmp(k.name, req) == 0) return k;
            }
        }
        return all.back(); // best available; scalar when nothing else compiled in
    }();
    return sel;
}

} // namespace

const std::vector<KernelVariant>& available_variants() {
    static const std::vector<KernelVariant> v = probe_variants();
    return v;
}

const char* active_variant() { return chosen().name; }

void decompose_batch(std::size_t n,
                     const double* sx, const double* sy, const double* sz,
                     const double* nx, const double* ny, const double* nz,
                     double eps_net,
                     double* par_x, double* par_y, double* par_z,
                     double* perp_x, double* perp_y, double* perp_z,
                     double* theta_deg, double* signed_mag) {
    chosen().decompose(n, sx, sy, sz, nx, ny, nz, eps_net,
                       par_x, par_y, par_z, perp_x, perp_y, perp_z,
                       theta_deg, signed_mag);
}

void signed_accel_batch(std::size_t n,
                        const double* ax, const double* ay, const double* az,
                        const double* vx, const double* vy, const double* vz,
                        double v_eps, double* out) {
    chosen().signed_accel(n, ax, ay, az, vx, vy, vz, v_eps, out);
}

} // namespace comanip::kernels
