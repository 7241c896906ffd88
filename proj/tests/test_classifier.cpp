#include <gtest/gtest.h>

#include <cmath>

#include "vrigid/classifier.hpp"

using namespace vrigid;

namespace {

/// Builds a profile from closures giving top height and saturation per bin;
/// bottom is filled in by the antipodal law.
template <class TopFn, class SatFn>
H3Profile syntheticProfile(int nbins, TopFn top, SatFn sat) {
    H3Profile p;
    p.nbins = nbins;
    p.top.resize(nbins);
    p.bottom.resize(nbins);
    p.topSaturated.resize(nbins);
    p.bottomSaturated.resize(nbins);
    for (int j = 0; j < nbins; ++j) {
        bool s = sat(p.binTheta(j));
        p.topSaturated[j] = s ? 1 : 0;
        p.top[j] = s ? 1.0 : top(p.binTheta(j));
    }
    for (int j = 0; j < nbins; ++j) {
        p.bottom[j] = -p.top[p.antipodeBin(j)];
        p.bottomSaturated[j] = p.topSaturated[p.antipodeBin(j)];
    }
    return p;
}

const Window kWindow{-3, 3, -3, 3};

}  // namespace

TEST(AffineDirection, PlaneReportsGradient) {
    FunctionSpec f(Affine{1, 2, -1});
    auto dir = detect_affine_direction(f, kWindow, 64, 1e-6);
    ASSERT_TRUE(dir.has_value());
    EXPECT_NEAR(dir->slope, std::hypot(2.0, -1.0), 1e-9);
    EXPECT_NEAR(dir->azimuth, std::atan2(-1.0, 2.0) + 2 * M_PI, 1e-9);
}

TEST(AffineDirection, ExpAffineHasOneFlatAzimuth) {
    FunctionSpec f(ExpAffine{0, 1, 1, 1});  // e^x + y: slope 1 along +y only
    auto dir = detect_affine_direction(f, kWindow, 64, 1e-6);
    ASSERT_TRUE(dir.has_value());
    EXPECT_NEAR(dir->azimuth, M_PI / 2, 1e-5);
    EXPECT_NEAR(dir->slope, 1.0, 1e-6);
}

TEST(AffineDirection, RotationCovariance) {
    double theta = 0.7;
    FunctionSpec f = rotate_about_z(FunctionSpec(ExpAffine{0, 1, 1, 1}), theta);
    auto dir = detect_affine_direction(f, kWindow, 64, 1e-6);
    ASSERT_TRUE(dir.has_value());
    EXPECT_NEAR(dir->azimuth, M_PI / 2 + theta, 1e-5);
    EXPECT_NEAR(dir->slope, 1.0, 1e-6);
}

TEST(AffineDirection, NoneForCurvedFunctions) {
    FunctionSpec f(Expression::parse("x*x + y*y"));
    EXPECT_FALSE(detect_affine_direction(f, kWindow, 64, 1e-6).has_value());
    FunctionSpec g(ExpStrip{0, 2, CurveSpec::fromExpression("2+cos(y)")});
    EXPECT_FALSE(detect_affine_direction(g, kWindow, 64, 1e-6).has_value());
}

TEST(Classify, AffineDirectionWinsAsCaseA) {
    auto prof = syntheticProfile(72, [](double t) { return 0.5 * std::cos(t); },
                                 [](double) { return false; });
    auto rc = classify_case(prof, AffineDirection{1.2, 0.8});
    EXPECT_EQ(rc.kind, RigidityCase::Kind::A);
    EXPECT_DOUBLE_EQ(rc.azimuth, 1.2);
    EXPECT_DOUBLE_EQ(rc.slope, 0.8);
}

TEST(Classify, AllSaturatedIsCaseB) {
    auto prof = syntheticProfile(72, [](double) { return 0.0; }, [](double) { return true; });
    auto rc = classify_case(prof, std::nullopt);
    EXPECT_EQ(rc.kind, RigidityCase::Kind::B);
}

TEST(Classify, SingleZeroWithSaturatedAntipodeIsCaseC) {
    const int n = 72;
    H3Profile p = syntheticProfile(n, [](double) { return 0.0; }, [](double) { return true; });
    int zbin = 17;
    p.topSaturated[zbin] = 0;
    p.top[zbin] = 0.001;
    for (int j = 0; j < n; ++j) {
        p.bottom[j] = -p.top[p.antipodeBin(j)];
        p.bottomSaturated[j] = p.topSaturated[p.antipodeBin(j)];
    }
    auto rc = classify_case(p, std::nullopt);
    ASSERT_EQ(rc.kind, RigidityCase::Kind::C);
    EXPECT_DOUBLE_EQ(rc.azimuth, p.binTheta(zbin));
}

TEST(Classify, ZeroArcWithSaturatedComplementIsCaseD) {
    const int n = 72;
    // zero on bins 10..20, saturated elsewhere
    auto inArc = [](int j) { return j >= 10 && j <= 20; };
    H3Profile p = syntheticProfile(n, [](double) { return 0.0; }, [](double) { return true; });
    for (int j = 0; j < n; ++j) {
        if (inArc(j)) {
            p.topSaturated[j] = 0;
            p.top[j] = 0.002;
        }
    }
    for (int j = 0; j < n; ++j) {
        p.bottom[j] = -p.top[p.antipodeBin(j)];
        p.bottomSaturated[j] = p.topSaturated[p.antipodeBin(j)];
    }
    auto rc = classify_case(p, std::nullopt);
    ASSERT_EQ(rc.kind, RigidityCase::Kind::D);
    EXPECT_DOUBLE_EQ(rc.arcStart, p.binTheta(10));
    EXPECT_DOUBLE_EQ(rc.arcEnd, p.binTheta(20));
}

TEST(Classify, AntipodalZeroPairIsCaseAWithZeroSlope) {
    const int n = 72;
    H3Profile p = syntheticProfile(
        n, [](double t) { return 0.3 * std::abs(std::sin(t)); }, [](double) { return false; });
    // zero bins at an exact antipodal pair (sin vanishes at 0 and pi), widened by tauZero
    auto rc = classify_case(p, std::nullopt);
    EXPECT_EQ(rc.kind, RigidityCase::Kind::A);
    EXPECT_DOUBLE_EQ(rc.slope, 0.0);
}

TEST(Classify, InconsistentProfileIsIndeterminate) {
    auto p = syntheticProfile(72, [](double t) { return 0.5 * std::cos(t); },
                              [](double) { return false; });
    p.bottom[3] += 0.5;
    auto rc = classify_case(p, std::nullopt);
    EXPECT_EQ(rc.kind, RigidityCase::Kind::Indeterminate);
}

TEST(Classify, FiniteEverywhereWithoutZerosIsIndeterminate) {
    auto p = syntheticProfile(72, [](double t) { return 0.4 + 0.3 * std::cos(t); },
                              [](double) { return false; });
    auto rc = classify_case(p, std::nullopt);
    EXPECT_EQ(rc.kind, RigidityCase::Kind::Indeterminate);
}

TEST(Classify, TwoNonAntipodalZeroArcsIsIndeterminate) {
    const int n = 72;
    H3Profile p = syntheticProfile(n, [](double) { return 0.5; }, [](double) { return false; });
    p.top[5] = 0.0;
    p.top[20] = 0.0;  // antipode of 5 is 41, so this pair is not antipodal
    for (int j = 0; j < n; ++j) p.bottom[j] = -p.top[p.antipodeBin(j)];
    auto rc = classify_case(p, std::nullopt);
    EXPECT_EQ(rc.kind, RigidityCase::Kind::Indeterminate);
}
