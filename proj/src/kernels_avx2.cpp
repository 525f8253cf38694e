// AVX2 variant of the batch kernels. Must round identically to the scalar
// reference: only IEEE mul/add/sub/div/sqrt plus blends, no FMA, and the final
// acos goes through the same libm call on the same double bits.

#include "comanip/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace comanip::kernels {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline __m256d abs_pd(__m256d x) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(x, mask);
}

inline void cswap_pd(__m256d& lo, __m256d& hi) {
    const __m256d swap = _mm256_cmp_pd(abs_pd(hi), abs_pd(lo), _CMP_LT_OQ);
    const __m256d nlo = _mm256_blendv_pd(lo, hi, swap);
    const __m256d nhi = _mm256_blendv_pd(hi, lo, swap);
    lo = nlo;
    hi = nhi;
}

// Same magnitude-ordered summation as the scalar dot3, four lanes at a time.
inline __m256d dot3_pd(__m256d ax, __m256d ay, __m256d az,
                       __m256d bx, __m256d by, __m256d bz) {
    __m256d p0 = _mm256_mul_pd(ax, bx);
    __m256d p1 = _mm256_mul_pd(ay, by);
    __m256d p2 = _mm256_mul_pd(az, bz);
    cswap_pd(p0, p1);
    cswap_pd(p1, p2);
    cswap_pd(p0, p1);
    return _mm256_add_pd(_mm256_add_pd(p0, p1), p2);
}

} // namespace

void decompose_batch_avx2(std::size_t n,
                          const double* sx, const double* sy, const double* sz,
                          const double* nx, const double* ny, const double* nz,
                          double eps_net,
                          double* par_x, double* par_y, double* par_z,
                          double* perp_x, double* perp_y, double* perp_z,
                          double* theta_deg, double* signed_mag) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d nan = _mm256_set1_pd(kNaN);
    const __m256d eps = _mm256_set1_pd(eps_net);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vsx = _mm256_loadu_pd(sx + i);
        const __m256d vsy = _mm256_loadu_pd(sy + i);
        const __m256d vsz = _mm256_loadu_pd(sz + i);
        const __m256d vnx = _mm256_loadu_pd(nx + i);
        const __m256d vny = _mm256_loadu_pd(ny + i);
        const __m256d vnz = _mm256_loadu_pd(nz + i);

        const __m256d nn = dot3_pd(vnx, vny, vnz, vnx, vny, vnz);
        const __m256d norm_net = _mm256_sqrt_pd(nn);
        const __m256d indet = _mm256_cmp_pd(norm_net, eps, _CMP_LE_OQ);

        const __m256d sn = dot3_pd(vsx, vsy, vsz, vnx, vny, vnz);
        const __m256d c = _mm256_div_pd(sn, nn);
        const __m256d px = _mm256_mul_pd(c, vnx);
        const __m256d py = _mm256_mul_pd(c, vny);
        const __m256d pz = _mm256_mul_pd(c, vnz);

        _mm256_storeu_pd(par_x + i, _mm256_blendv_pd(px, zero, indet));
        _mm256_storeu_pd(par_y + i, _mm256_blendv_pd(py, zero, indet));
        _mm256_storeu_pd(par_z + i, _mm256_blendv_pd(pz, zero, indet));
        _mm256_storeu_pd(perp_x + i, _mm256_blendv_pd(_mm256_sub_pd(vsx, px), zero, indet));
        _mm256_storeu_pd(perp_y + i, _mm256_blendv_pd(_mm256_sub_pd(vsy, py), zero, indet));
        _mm256_storeu_pd(perp_z + i, _mm256_blendv_pd(_mm256_sub_pd(vsz, pz), zero, indet));
        _mm256_storeu_pd(signed_mag + i,
                         _mm256_blendv_pd(_mm256_div_pd(sn, norm_net), nan, indet));

        const __m256d ss = dot3_pd(vsx, vsy, vsz, vsx, vsy, vsz);
        const __m256d norm_self = _mm256_sqrt_pd(ss);
        const __m256d cosraw =
            _mm256_div_pd(sn, _mm256_mul_pd(norm_self, norm_net));

        alignas(32) double cos_l[4], nnet_l[4], nself_l[4];
        _mm256_store_pd(cos_l, cosraw);
        _mm256_store_pd(nnet_l, norm_net);
        _mm256_store_pd(nself_l, norm_self);
        for (int k = 0; k < 4; ++k) {
            if (nnet_l[k] <= eps_net) {
                theta_deg[i + k] = kNaN;
            } else if (nself_l[k] == 0.0) {
                theta_deg[i + k] = 90.0;
            } else {
                double cosv = cos_l[k];
                if (cosv > 1.0) cosv = 1.0;
                if (cosv < -1.0) cosv = -1.0;
                theta_deg[i + k] = std::acos(cosv) * kDegPerRad;
            }
        }
    }
    if (i < n) {
        decompose_batch_scalar(n - i, sx + i, sy + i, sz + i, nx + i, ny + i, nz + i,
                               eps_net, par_x + i, par_y + i, par_z + i,
                               perp_x + i, perp_y + i, perp_z + i,
                               theta_deg + i, signed_mag + i);
    }
}

void signed_accel_batch_avx2(std::size_t n,
                             const double* ax, const double* ay, const double* az,
                             const double* vx, const double* vy, const double* vz,
                             double v_eps, double* out) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d eps = _mm256_set1_pd(v_eps);
    const __m256d signbit = _mm256_set1_pd(-0.0);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vax = _mm256_loadu_pd(ax + i);
        const __m256d vay = _mm256_loadu_pd(ay + i);
        const __m256d vaz = _mm256_loadu_pd(az + i);
        const __m256d vvx = _mm256_loadu_pd(vx + i);
        const __m256d vvy = _mm256_loadu_pd(vy + i);
        const __m256d vvz = _mm256_loadu_pd(vz + i);

        const __m256d na = _mm256_sqrt_pd(dot3_pd(vax, vay, vaz, vax, vay, vaz));
        const __m256d nv = _mm256_sqrt_pd(dot3_pd(vvx, vvy, vvz, vvx, vvy, vvz));
        const __m256d av = dot3_pd(vax, vay, vaz, vvx, vvy, vvz);

        const __m256d pos = _mm256_cmp_pd(av, zero, _CMP_GT_OQ);
        const __m256d neg = _mm256_cmp_pd(av, zero, _CMP_LT_OQ);
        const __m256d nna = _mm256_xor_pd(na, signbit);
        __m256d r = _mm256_blendv_pd(zero, nna, neg);
        r = _mm256_blendv_pd(r, na, pos);
        const __m256d rest = _mm256_cmp_pd(nv, eps, _CMP_LE_OQ);
        r = _mm256_blendv_pd(r, na, rest);
        _mm256_storeu_pd(out + i, r);
    }
    if (i < n) {
        signed_accel_batch_scalar(n - i, ax + i, ay + i, az + i, vx + i, vy + i, vz + i,
                                  v_eps, out + i);
    }
}

} // namespace comanip::kernels
