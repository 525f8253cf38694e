#include "comanip/kernels.hpp"

#include <limits>

namespace comanip::kernels {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void decompose_batch_scalar(std::size_t n,
                            const double* sx, const double* sy, const double* sz,
                            const double* nx, const double* ny, const double* nz,
                            double eps_net,
                            double* par_x, double* par_y, double* par_z,
                            double* perp_x, double* perp_y, double* perp_z,
                            double* theta_deg, double* signed_mag) {
    for (std::size_t i = 0; i < n; ++i) {
        const double nn = dot3(nx[i], ny[i], nz[i], nx[i], ny[i], nz[i]);
        const double norm_net = std::sqrt(nn);
        if (norm_net <= eps_net) {
            par_x[i] = par_y[i] = par_z[i] = 0.0;
            perp_x[i] = perp_y[i] = perp_z[i] = 0.0;
            theta_deg[i] = kNaN;
            signed_mag[i] = kNaN;
            continue;
        }
        const double sn = dot3(sx[i], sy[i], sz[i], nx[i], ny[i], nz[i]);
        const double c = sn / nn;
        const double px = c * nx[i], py = c * ny[i], pz = c * nz[i];
        par_x[i] = px;
        par_y[i] = py;
        par_z[i] = pz;
        perp_x[i] = sx[i] - px;
        perp_y[i] = sy[i] - py;
        perp_z[i] = sz[i] - pz;
        signed_mag[i] = sn / norm_net;

        const double norm_self = norm3(sx[i], sy[i], sz[i]);
        if (norm_self == 0.0) {
            theta_deg[i] = 90.0;
            continue;
        }
        double cosv = sn / (norm_self * norm_net);
        if (cosv > 1.0) cosv = 1.0;
        if (cosv < -1.0) cosv = -1.0;
        theta_deg[i] = std::acos(cosv) * kDegPerRad;
    }
}

void signed_accel_batch_scalar(std::size_t n,
                               const double* ax, const double* ay, const double* az,
                               const double* vx, const double* vy, const double* vz,
                               double v_eps, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double na = norm3(ax[i], ay[i], az[i]);
        const double nv = norm3(vx[i], vy[i], vz[i]);
        if (nv <= v_eps) {
            out[i] = na;
            continue;
        }
        const double av = dot3(ax[i], ay[i], az[i], vx[i], vy[i], vz[i]);
        out[i] = av > 0.0 ? na : (av < 0.0 ? -na : 0.0);
    }
}

} // namespace comanip::kernels
