#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "comanip/geometry.hpp"
#include "helpers.hpp"

using namespace comanip;
using testutil::bits_equal;

namespace {

template <typename Fn>
Errc thrown_code(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a comanip::Error");
    return Errc::Validation;
}

bool vec_close(const CartesianVector& a, const CartesianVector& b, double tol) {
    return (a - b).norm() <= tol;
}

} // namespace

TEST_CASE("decompose_force: colinear, orthogonal, oblique, degenerate") {
    SUBCASE("colinear input projects fully") {
        const auto d = decompose_force(CartesianVector::force(2, 0, 0),
                                       CartesianVector::force(5, 0, 0));
        CHECK(d.parallel.same_components(CartesianVector::force(2, 0, 0)));
        CHECK(d.perpendicular.norm() == 0.0);
        CHECK(d.theta_deg == 0.0);
        CHECK(d.category == Category::Aligned);
        CHECK(d.parallel_signed_mag == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("orthogonal input is all rejection") {
        const auto d = decompose_force(CartesianVector::force(0, 3, 0),
                                       CartesianVector::force(5, 0, 0));
        CHECK(d.parallel.norm() == 0.0);
        CHECK(d.perpendicular.same_components(CartesianVector::force(0, 3, 0)));
        CHECK(d.theta_deg == 90.0);
        CHECK(d.category == Category::Orthogonal);
        CHECK(d.parallel_signed_mag == 0.0);
    }
    SUBCASE("oblique input splits against the direct projection formula") {
        const auto d = decompose_force(CartesianVector::force(3, 4, 0),
                                       CartesianVector::force(1, 0, 0));
        CHECK(vec_close(d.parallel, CartesianVector::force(3, 0, 0), 1e-12));
        CHECK(vec_close(d.perpendicular, CartesianVector::force(0, 4, 0), 1e-12));
        // independent oracle: theta from the arccos identity on this exact pair
        const double expect = std::acos(3.0 / 5.0) * 180.0 / std::numbers::pi;
        CHECK(d.theta_deg == doctest::Approx(expect).epsilon(1e-12));
        CHECK(d.theta_deg == doctest::Approx(53.13010235415598).epsilon(1e-12));
        CHECK(d.category == Category::Acute);
        CHECK(d.parallel_signed_mag == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("net force below the dead-band is indeterminate") {
        const auto d = decompose_force(CartesianVector::force(1, 1, 0),
                                       CartesianVector::force(0, 0, 0), 1e-6);
        CHECK(d.category == Category::Indeterminate);
        CHECK(!d.determinate());
        CHECK(d.parallel.norm() == 0.0);
        CHECK(d.perpendicular.norm() == 0.0);
        CHECK(std::isnan(d.theta_deg));
        CHECK(std::isnan(d.parallel_signed_mag));
    }
    SUBCASE("zero self force carries no alignment information: orthogonal at 90") {
        const auto d = decompose_force(CartesianVector::force(0, 0, 0),
                                       CartesianVector::force(4, 1, 0));
        CHECK(d.theta_deg == 90.0);
        CHECK(d.category == Category::Orthogonal);
        CHECK(d.parallel.norm() == 0.0);
    }
    SUBCASE("input validation") {
        CHECK(thrown_code([] {
                  decompose_force(CartesianVector::torque(1, 0, 0),
                                  CartesianVector::force(1, 0, 0));
              }) == Errc::Validation);
        CHECK(thrown_code([] {
                  decompose_force(CartesianVector::force(1, 0, 0),
                                  CartesianVector::force(1, 0, 0), -1.0);
              }) == Errc::Validation);
        CHECK_THROWS_AS(CartesianVector::force(std::nan(""), 0, 0), Error);
    }
}

TEST_CASE("decompose_torque mirrors the force contract") {
    const auto a = decompose_torque(CartesianVector::torque(0, 0, 2),
                                    CartesianVector::torque(0, 0, 4));
    CHECK(a.parallel.same_components(CartesianVector::torque(0, 0, 2)));
    CHECK(a.perpendicular.norm() == 0.0);
    CHECK(a.theta_deg == 0.0);

    const auto b = decompose_torque(CartesianVector::torque(0, 0, -1),
                                    CartesianVector::torque(0, 0, 3));
    CHECK(vec_close(b.parallel, CartesianVector::torque(0, 0, -1), 1e-12));
    CHECK(b.theta_deg == 180.0);
    CHECK(b.category == Category::Antagonistic);

    const auto c = decompose_torque(CartesianVector::torque(0, 1, 1),
                                    CartesianVector::torque(0, 0, 2));
    CHECK(vec_close(c.parallel, CartesianVector::torque(0, 0, 1), 1e-12));
    CHECK(vec_close(c.perpendicular, CartesianVector::torque(0, 1, 0), 1e-12));
    CHECK(c.theta_deg == doctest::Approx(45.0).epsilon(1e-12));
    CHECK(c.parallel.unit == Unit::Torque);
}

TEST_CASE("angle_between") {
    CHECK(angle_between(CartesianVector::force(1, 0, 0), CartesianVector::force(0, 1, 0)) == 90.0);
    CHECK(angle_between(CartesianVector::force(1, 0, 0), CartesianVector::force(-1, 0, 0)) ==
          180.0);
    const double expect = std::acos(1.0 / std::sqrt(2.0)) * 180.0 / std::numbers::pi;
    CHECK(angle_between(CartesianVector::force(1, 1, 0), CartesianVector::force(1, 0, 0)) ==
          doctest::Approx(expect).epsilon(1e-13));
    CHECK(thrown_code([] {
              angle_between(CartesianVector::force(0, 0, 0), CartesianVector::force(1, 0, 0));
          }) == Errc::Geometry);
    CHECK(thrown_code([] {
              angle_between(CartesianVector::force(1, 0, 0), CartesianVector::position(1, 0, 0));
          }) == Errc::Validation);
    // nearly parallel vectors stay inside [0,180] thanks to the cosine clamp
    const auto a = CartesianVector::force(1.0, 1e-16, 0.0);
    CHECK(angle_between(a, a * 3.0) >= 0.0);
}

TEST_CASE("classify_category bands and boundaries") {
    CHECK(classify_category(3.0) == Category::Aligned);
    CHECK(classify_category(90.0) == Category::Orthogonal);
    CHECK(classify_category(120.0) == Category::Obtuse);
    // closed bounds belong to the narrow bands
    CHECK(classify_category(5.0) == Category::Aligned);
    CHECK(classify_category(85.0) == Category::Orthogonal);
    CHECK(classify_category(95.0) == Category::Orthogonal);
    CHECK(classify_category(175.0) == Category::Antagonistic);
    CHECK(classify_category(0.0) == Category::Aligned);
    CHECK(classify_category(180.0) == Category::Antagonistic);
    CHECK(classify_category(5.0000001) == Category::Acute);
    CHECK(classify_category(174.9999999) == Category::Obtuse);

    CHECK(thrown_code([] { classify_category(-0.1); }) == Errc::Validation);
    CHECK(thrown_code([] { classify_category(180.1); }) == Errc::Validation);
    CHECK(thrown_code([] { classify_category(std::nan("")); }) == Errc::Validation);

    SUBCASE("custom band widths") {
        const CategoryBands wide{10.0, 2.0, 7.0};
        CHECK(classify_category(10.0, wide) == Category::Aligned);
        CHECK(classify_category(10.1, wide) == Category::Acute);
        CHECK(classify_category(87.9, wide) == Category::Acute);
        CHECK(classify_category(88.0, wide) == Category::Orthogonal);
        CHECK(classify_category(173.0, wide) == Category::Antagonistic);
    }
    SUBCASE("invalid bands rejected") {
        CHECK(thrown_code([] { classify_category(10.0, CategoryBands{0.0, 5.0, 5.0}); }) ==
              Errc::Validation);
        CHECK(thrown_code([] { classify_category(10.0, CategoryBands{5.0, 45.0, 5.0}); }) ==
              Errc::Validation);
    }
}

TEST_CASE("classify_category: 0.1-degree sweep partitions [0,180]") {
    std::size_t counts[5] = {0, 0, 0, 0, 0};
    for (int k = 0; k <= 1800; ++k) {
        const double theta = static_cast<double>(k) / 10.0;
        const Category c = classify_category(theta);
        REQUIRE(static_cast<int>(c) < 5);
        ++counts[static_cast<int>(c)];
    }
    // closed narrow bands: [0,5] and [175,180] hold 51 grid points each,
    // [85,95] holds 101; acute/obtuse take the open remainder
    CHECK(counts[0] == 51);
    CHECK(counts[1] == 799);
    CHECK(counts[2] == 101);
    CHECK(counts[3] == 799);
    CHECK(counts[4] == 51);
}

TEST_CASE("planar_reduce") {
    const auto g = CartesianVector::position(0, 0, 1);
    SUBCASE("masks the gravity-axis force and transverse torques") {
        const WrenchSample w{0.0, CartesianVector::force(1, 2, 3), CartesianVector::torque(4, 5, 6)};
        const WrenchSample r = planar_reduce(w, g);
        CHECK(r.force.same_components(CartesianVector::force(1, 2, 0)));
        CHECK(r.torque.same_components(CartesianVector::torque(0, 0, 6)));
    }
    SUBCASE("a pure gravity load vanishes") {
        const WrenchSample w{0.0, CartesianVector::force(0, 0, -9.81 * 20.0),
                             CartesianVector::torque(0, 0, 0)};
        const WrenchSample r = planar_reduce(w, g);
        CHECK(r.force.norm() == 0.0);
        CHECK(r.torque.norm() == 0.0);
    }
    SUBCASE("already planar input passes through bit-for-bit") {
        const WrenchSample w{0.0, CartesianVector::force(1.0 / 3.0, -0.7, 0),
                             CartesianVector::torque(0, 0, 1.1e-17)};
        const WrenchSample r = planar_reduce(w, g);
        CHECK(bits_equal(r.force.x, w.force.x));
        CHECK(bits_equal(r.force.y, w.force.y));
        CHECK(bits_equal(r.force.z, 0.0));
        CHECK(bits_equal(r.torque.z, w.torque.z));
    }
    SUBCASE("retained channels unchanged for random wrenches") {
        std::mt19937_64 rng(71);
        for (int i = 0; i < 200; ++i) {
            const auto f = testutil::random_vector(rng, Unit::Force);
            const auto tau = testutil::random_vector(rng, Unit::Torque);
            const WrenchSample r = planar_reduce({0.0, f, tau}, g);
            CHECK(bits_equal(r.force.x, f.x));
            CHECK(bits_equal(r.force.y, f.y));
            CHECK(bits_equal(r.torque.z, tau.z));
            CHECK(r.force.z == 0.0);
            CHECK(r.torque.x == 0.0);
            CHECK(r.torque.y == 0.0);
        }
    }
    SUBCASE("non-unit axis rejected") {
        CHECK(thrown_code([] {
                  planar_reduce({0.0, CartesianVector::force(1, 0, 0),
                                 CartesianVector::torque(0, 0, 0)},
                                CartesianVector::position(0, 0, 1.001));
              }) == Errc::Validation);
    }
    SUBCASE("channel mask variants") {
        const WrenchSample w{0.0, CartesianVector::force(1, 2, 3), CartesianVector::torque(4, 5, 6)};
        const WrenchSample keep_f = planar_reduce(w, g, {false, true});
        CHECK(keep_f.force.same_components(w.force));
        CHECK(keep_f.torque.same_components(CartesianVector::torque(0, 0, 6)));
        const WrenchSample keep_t = planar_reduce(w, g, {true, false});
        CHECK(keep_t.force.same_components(CartesianVector::force(1, 2, 0)));
        CHECK(keep_t.torque.same_components(w.torque));
    }
    SUBCASE("oblique gravity axis removes exactly the axial force component") {
        const auto axis = CartesianVector::position(1, 1, 1).normalized();
        std::mt19937_64 rng(5);
        for (int i = 0; i < 50; ++i) {
            const auto f = testutil::random_vector(rng, Unit::Force);
            const auto tau = testutil::random_vector(rng, Unit::Torque);
            const WrenchSample r = planar_reduce({0.0, f, tau}, axis);
            CHECK(std::fabs(dot(r.force, axis.retag(Unit::Force))) <= 1e-9 * f.norm());
            // torque keeps only its axial part
            const double tdot = dot(r.torque, axis.retag(Unit::Torque));
            CHECK((r.torque - axis.retag(Unit::Torque) * tdot).norm() <= 1e-9 * tau.norm());
        }
    }
}

TEST_CASE("decomposition properties over random pairs") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const auto s = testutil::random_vector(rng, Unit::Force);
        const auto n = testutil::random_vector(rng, Unit::Force);
        const auto d = decompose_force(s, n);
        const double ns = s.norm();

        CHECK((d.parallel + d.perpendicular - s).norm() <= 1e-9 * ns);
        CHECK(std::fabs(dot(d.parallel, d.perpendicular)) <= 1e-9 * ns * ns);
        CHECK(std::fabs(d.parallel.norm_sq() + d.perpendicular.norm_sq() - ns * ns) <=
              1e-9 * ns * ns);
        CHECK(d.parallel.norm() <= ns * (1.0 + 1e-9));
        CHECK(d.perpendicular.norm() <= ns * (1.0 + 1e-9));
        CHECK(d.theta_deg >= 0.0);
        CHECK(d.theta_deg <= 180.0);
    }
}

TEST_CASE("decomposition is rotation-equivariant and net-scale invariant") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> us(0.01, 100.0);
    for (int i = 0; i < 500; ++i) {
        const auto s = testutil::random_vector(rng, Unit::Force);
        const auto n = testutil::random_vector(rng, Unit::Force);
        const auto base = decompose_force(s, n);

        {
            // general rotation: equivariant within 1e-9, same category
            const auto r = testutil::random_rotation(rng);
            const auto rot = decompose_force(r.apply(s), r.apply(n));
            CHECK((rot.parallel - r.apply(base.parallel)).norm() <= 1e-9 * s.norm());
            CHECK((rot.perpendicular - r.apply(base.perpendicular)).norm() <= 1e-9 * s.norm());
            CHECK(std::fabs(rot.theta_deg - base.theta_deg) <= 1e-9);
            CHECK(rot.category == base.category);
        }
        {
            // exact orthogonal transform: theta and components bit-identical
            const auto r = testutil::signed_permutation_rotation(rng);
            const auto rot = decompose_force(r.apply(s), r.apply(n));
            CHECK(bits_equal(rot.theta_deg, base.theta_deg));
            CHECK(rot.category == base.category);
            const auto par_expect = r.apply(base.parallel);
            CHECK(bits_equal(rot.parallel.x, par_expect.x));
            CHECK(bits_equal(rot.parallel.y, par_expect.y));
            CHECK(bits_equal(rot.parallel.z, par_expect.z));
        }
        {
            // power-of-two scaling of the net force: bit-identical outputs.
            // eps_net = 0: an absolute dead-band may legitimately swallow a
            // scaled-down net force, which is not a scale-invariance failure.
            const auto base0 = decompose_force(s, n, 0.0);
            const int e = static_cast<int>(rng() % 41) - 20;
            const double k = std::ldexp(1.0, e);
            const auto scaled = decompose_force(s, n * k, 0.0);
            CHECK(bits_equal(scaled.theta_deg, base0.theta_deg));
            CHECK(bits_equal(scaled.parallel.x, base0.parallel.x));
            CHECK(bits_equal(scaled.parallel.y, base0.parallel.y));
            CHECK(bits_equal(scaled.parallel.z, base0.parallel.z));
            CHECK(scaled.category == base0.category);
        }
        {
            // arbitrary positive scaling: theta equal to rounding noise
            const auto scaled = decompose_force(s, n * us(rng), 0.0);
            const auto base0 = decompose_force(s, n, 0.0);
            CHECK(std::fabs(scaled.theta_deg - base0.theta_deg) <= 1e-12 * 180.0);
            CHECK(scaled.category == base0.category);
        }
    }
}

TEST_CASE("the opposite rejection sign breaks reconstruction") {
    // The rejection must be f_self - parallel. Its negation (parallel - f_self)
    // looks plausible on paper but fails reconstruction by exactly 2*perp and
    // can exceed the input magnitude.
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const auto s = testutil::random_vector(rng, Unit::Force);
        const auto n = testutil::random_vector(rng, Unit::Force);
        const auto d = decompose_force(s, n);

        const CartesianVector flipped = d.parallel - s; // sign-flipped rejection
        const double implemented_err = (d.parallel + d.perpendicular - s).norm();
        const double flipped_err = (d.parallel + flipped - s).norm();

        CHECK(implemented_err <= 1e-9 * s.norm());
        CHECK(flipped_err == doctest::Approx(2.0 * d.perpendicular.norm()).epsilon(1e-9));
        if (d.theta_deg > 1.0 && d.theta_deg < 179.0) {
            CHECK(flipped_err > 1e-3 * s.norm());
        }
    }
}

TEST_CASE("unit tag algebra") {
    CHECK_THROWS_AS(CartesianVector::force(1, 0, 0) + CartesianVector::torque(1, 0, 0), Error);
    CHECK_THROWS_AS(dot(CartesianVector::force(1, 0, 0), CartesianVector::torque(1, 0, 0)), Error);
    CHECK(dot(CartesianVector::force(2, 0, 0), CartesianVector::position(3, 0, 0)) == 6.0);
    CHECK(dot(CartesianVector::acceleration(2, 0, 0), CartesianVector::velocity(3, 0, 0)) == 6.0);
    const auto tau = cross(CartesianVector::position(1, 0, 0), CartesianVector::force(0, 2, 0));
    CHECK(tau.unit == Unit::Torque);
    CHECK(tau.same_components(CartesianVector::torque(0, 0, 2)));
    CHECK_THROWS_AS(cross(CartesianVector::force(1, 0, 0), CartesianVector::force(0, 1, 0)),
                    Error);
}
