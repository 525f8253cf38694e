#pragma once

#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "comanip/trial.hpp"
#include "comanip/vec3.hpp"

namespace testutil {

inline bool bits_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

/// 3x3 rotation matrix (row-major).
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    comanip::CartesianVector apply(const comanip::CartesianVector& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z, v.unit};
    }
};

/// Rotation from a random unit quaternion.
inline Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double q[4];
    double n = 0.0;
    do {
        for (double& c : q) c = normal(rng);
        n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    } while (n < 1e-6);
    for (double& c : q) c /= n;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3 r;
    r.m = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
           2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
           2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)};
    return r;
}

/// One of the 24 proper signed-permutation rotations (exact in floating
/// point): a permutation of the axes with sign flips of determinant +1.
inline Mat3 signed_permutation_rotation(std::mt19937_64& rng) {
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    static constexpr int perm_sign[6] = {1, -1, -1, 1, 1, -1};
    std::uniform_int_distribution<int> pick_perm(0, 5);
    std::uniform_int_distribution<int> pick_signs(0, 7);
    for (;;) {
        const int p = pick_perm(rng);
        const int s = pick_signs(rng);
        const int sign[3] = {(s & 1) ? -1 : 1, (s & 2) ? -1 : 1, (s & 4) ? -1 : 1};
        if (perm_sign[p] * sign[0] * sign[1] * sign[2] != 1) continue; // want det +1
        Mat3 r;
        r.m.fill(0.0);
        for (int row = 0; row < 3; ++row) {
            r.m[static_cast<std::size_t>(3 * row + perms[p][row])] = sign[row];
        }
        return r;
    }
}

inline comanip::CartesianVector random_vector(std::mt19937_64& rng, comanip::Unit unit,
                                              double min_log10 = -3.0, double max_log10 = 3.0) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> logmag(min_log10, max_log10);
    double x, y, z, n;
    do {
        x = normal(rng);
        y = normal(rng);
        z = normal(rng);
        n = std::sqrt(x * x + y * y + z * z);
    } while (n < 1e-9);
    const double mag = std::pow(10.0, logmag(rng));
    return {x / n * mag, y / n * mag, z / n * mag, unit};
}

/// Minimal valid two-agent trial at rest: zero wrenches, zero kinematics,
/// grasp offsets +/-0.5 m on x. Tests overwrite the streams they exercise.
inline comanip::TrialRecord two_agent_trial(std::size_t n_samples, double rate_hz = 200.0) {
    using comanip::CartesianVector;
    comanip::TrialRecord r;
    r.meta.study_label = "test";
    r.meta.trial_id = "test-trial";
    r.meta.sample_rate_hz = rate_hz;
    r.meta.mass_kg = 20.0;
    r.meta.inertia_z = 5.0;
    r.meta.agents = {{"a0", CartesianVector::position(0.5, 0, 0)},
                     {"a1", CartesianVector::position(-0.5, 0, 0)}};
    for (std::size_t i = 0; i < n_samples; ++i) {
        comanip::TrialSample s;
        s.t = static_cast<double>(i) / rate_hz;
        s.force = {CartesianVector::force(0, 0, 0), CartesianVector::force(0, 0, 0)};
        s.torque = {CartesianVector::torque(0, 0, 0), CartesianVector::torque(0, 0, 0)};
        s.pos = CartesianVector::position(0, 0, 0);
        s.yaw = 0.0;
        s.vel = CartesianVector::velocity(0, 0, 0);
        s.acc = CartesianVector::acceleration(0, 0, 0);
        s.yaw_rate = 0.0;
        r.samples.push_back(std::move(s));
    }
    return r;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("comanip-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::string out;
    std::ifstream in(p, std::ios::binary);
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        out.append(buf, static_cast<std::size_t>(in.gcount()));
    }
    return out;
}

} // namespace testutil
