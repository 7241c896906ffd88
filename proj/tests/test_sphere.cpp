#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vrigid/sphere.hpp"

using namespace vrigid;

namespace {
SphereDirection randomDir(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0, 1);
    for (;;) {
        Vec3 v{n(rng), n(rng), n(rng)};
        if (v.norm() > 1e-6) return SphereDirection::normalize(v);
    }
}
}  // namespace

TEST(SphereDirection, NormalizeAndAntipode) {
    auto d = SphereDirection::normalize({3, 0, 4});
    EXPECT_NEAR(d.v.norm(), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(d.v.x, 0.6);
    EXPECT_DOUBLE_EQ(d.v.z, 0.8);
    EXPECT_NEAR(d.angleTo(d.antipode()), M_PI, 1e-12);
    EXPECT_THROW(SphereDirection::normalize({0, 0, 0}), DegenerateChord);
}

TEST(Psi, FixesPolesAndEquator) {
    for (double c : {0.5, 2.0, 10.0}) {
        auto pole = psi(c, SphereDirection{{0, 0, 1}});
        EXPECT_NEAR(pole.v.z, 1.0, 1e-15);
        auto eq = psi(c, SphereDirection::normalize({1, 2, 0}));
        EXPECT_NEAR(eq.v.z, 0.0, 1e-15);
        EXPECT_NEAR(eq.angleTo(SphereDirection::normalize({1, 2, 0})), 0.0, 1e-12);
    }
    EXPECT_THROW(psi(0.0, SphereDirection{{0, 0, 1}}), InvalidScale);
    EXPECT_THROW(psi(-1.0, SphereDirection{{0, 0, 1}}), InvalidScale);
}

TEST(Psi, GroupLaws) {
    // acos resolves tiny angles only to ~1e-8, hence the tolerance
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto d = randomDir(rng);
        // psi_1 = id
        EXPECT_NEAR(psi(1.0, d).angleTo(d), 0.0, 1e-7);
        // psi_a . psi_b = psi_{ab}
        auto ab = psi(2.0, psi(3.0, d));
        EXPECT_NEAR(ab.angleTo(psi(6.0, d)), 0.0, 1e-7);
        // psi_c inverse is psi_{1/c}
        EXPECT_NEAR(psi(0.25, psi(4.0, d)).angleTo(d), 0.0, 1e-7);
        // commutes with the antipodal map
        EXPECT_NEAR(psi(5.0, d.antipode()).angleTo(psi(5.0, d).antipode()), 0.0, 1e-7);
    }
}

TEST(AlphaAngle, FrozenValues) {
    EXPECT_NEAR(alpha_angle(2, 1), 0.32175055439664213, 1e-15);
    EXPECT_NEAR(alpha_angle(10, 1), 0.6857295109062864, 1e-15);
    EXPECT_DOUBLE_EQ(alpha_angle(1, 0.3), 0.0);
    // odd in d
    EXPECT_NEAR(alpha_angle(2, -1), -0.32175055439664213, 1e-15);
    EXPECT_THROW(alpha_angle(0, 1), InvalidScale);
}

TEST(WCoefficient, FrozenValues) {
    EXPECT_DOUBLE_EQ(w_coefficient(1, 1), 1.0);
    EXPECT_NEAR(w_coefficient(2, 1), 0.7905694150420949, 1e-15);
    EXPECT_NEAR(w_coefficient(3, 1), 0.7453559924999299, 1e-15);
    EXPECT_NEAR(w_coefficient(10, 1), 0.7106335201775947, 1e-15);
    EXPECT_NEAR(w_coefficient(2, 0.5), 1.2649110640673518, 1e-15);
    EXPECT_NEAR(w_coefficient(0.5, 1), 1.5811388300841898, 1e-15);
    EXPECT_THROW(w_coefficient(2, 0), InvalidScale);
    EXPECT_THROW(w_coefficient(0, 1), InvalidScale);
}

TEST(WCoefficient, StrictlyDecreasingWithLimit) {
    for (double d : {0.1, 1.0, 10.0}) {
        double prev = w_coefficient(1e-3, d);
        for (int i = 1; i < 1000; ++i) {
            double c = 1e-3 * std::pow(1e7, i / 999.0);
            double w = w_coefficient(c, d);
            EXPECT_LT(w, prev) << "c=" << c << " d=" << d;
            prev = w;
        }
        // limit as c -> infinity is 1/sqrt(d^2+1)
        EXPECT_NEAR(w_coefficient(1e9, d), 1.0 / std::sqrt(d * d + 1.0), 1e-9);
    }
}

TEST(Rotations, MatricesActAsExpected) {
    Vec3 ey{0, 1, 0};
    Vec3 r = rotation_about_x(M_PI / 2) * ey;
    EXPECT_NEAR(r.z, 1.0, 1e-15);
    EXPECT_NEAR(r.y, 0.0, 1e-15);

    // rotation about y by arctan(m2)-arctan(m1) takes slope m1 to m2 in the xz-plane
    double m1 = 1.0, m2 = 2.0;
    Vec3 v = rotation_about_y(std::atan(m2) - std::atan(m1)) * Vec3{1, 0, m1};
    EXPECT_NEAR(v.z / v.x, m2, 1e-12);

    Vec3 ex{1, 0, 0};
    Vec3 rz = rotation_about_z(M_PI / 2) * ex;
    EXPECT_NEAR(rz.y, 1.0, 1e-15);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int i = 0; i < 100; ++i) {
        double a = u(rng);
        for (const Mat3& Q : {rotation_about_x(a), rotation_about_y(a), rotation_about_z(a)}) {
            EXPECT_NEAR(std::abs(Q.det() - 1.0), 0.0, 1e-12);
            auto d = randomDir(rng);
            EXPECT_NEAR((Q * d.v).norm(), 1.0, 1e-12);
        }
    }
}

TEST(SlopeHeight, RoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 500; ++i) {
        double m = u(rng);
        double z = slope_to_height(m);
        EXPECT_GT(z, -1.0);
        EXPECT_LT(z, 1.0);
        EXPECT_NEAR(height_to_slope(z), m, 1e-9 * (1.0 + std::abs(m)));
    }
    EXPECT_DOUBLE_EQ(slope_to_height(std::numeric_limits<double>::infinity()), 1.0);
    EXPECT_TRUE(std::isinf(height_to_slope(1.0)));
    EXPECT_DOUBLE_EQ(slope_to_height(0.0), 0.0);
}

TEST(Isometry, ComposeInverseDecompose) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 100; ++i) {
        Isometry3 A = Isometry3::rotation(rotation_about_x(u(rng)));
        A.t = {u(rng), u(rng), u(rng)};
        Isometry3 B = Isometry3::rotation(rotation_about_z(u(rng)));
        B.t = {u(rng), u(rng), u(rng)};
        Vec3 p{u(rng), u(rng), u(rng)};

        Vec3 viaCompose = apply_isometry(A.compose(B), p);
        Vec3 sequential = apply_isometry(A, apply_isometry(B, p));
        EXPECT_NEAR((viaCompose - sequential).norm(), 0.0, 1e-12);

        Vec3 back = apply_isometry(A.inverse(), apply_isometry(A, p));
        EXPECT_NEAR((back - p).norm(), 0.0, 1e-12);

        auto [ort, trans] = decompose_isometry(A);
        Vec3 recomposed = apply_isometry(trans.compose(ort), p);
        EXPECT_NEAR((recomposed - apply_isometry(A, p)).norm(), 0.0, 1e-12);
        EXPECT_DOUBLE_EQ(ort.t.norm(), 0.0);
        EXPECT_DOUBLE_EQ(trans.orthogonalityError(), 0.0);
    }
}

TEST(Isometry, ValidityAndRepair) {
    Isometry3 good = Isometry3::rotation(rotation_about_y(0.4));
    EXPECT_TRUE(good.valid());

    Isometry3 bad = good;
    bad.Q.m[0] += 1e-3;
    EXPECT_FALSE(bad.valid(1e-10));
    EXPECT_THROW(apply_isometry(bad, {1, 0, 0}), NotOrthogonal);

    Isometry3 fixed = reorthonormalize(bad);
    EXPECT_TRUE(fixed.valid(1e-10));
    EXPECT_LT(fixed.Q.maxAbsDiff(good.Q), 1e-2);
}

TEST(ChordDirection, AntipodalPair) {
    Vec3 p{1, 2, 3}, q{0, 0, 1};
    auto d1 = direction_of_chord(p, q);
    auto d2 = direction_of_chord(q, p);
    EXPECT_NEAR((d1.v + d2.v).norm(), 0.0, 1e-15);
    EXPECT_THROW(direction_of_chord(p, p), DegenerateChord);
}
