#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "vrigid/io.hpp"
#include "vrigid/report.hpp"

using namespace vrigid;

namespace {

AnalysisOptions fastOptions() {
    AnalysisOptions opt;
    opt.window = Window(-3, 3, -3, 3);
    opt.nbins = 72;
    opt.npairs = 200;
    opt.segmentsPerBin = 16;
    return opt;
}

}  // namespace

TEST(ReportJson, RoundTripFromAnalysis) {
    auto opt = fastOptions();
    auto res = issue_verdict(FunctionSpec(Expression::parse("exp(x)+y")), opt);
    auto rep = make_report("exp(x)+y", opt, res);
    json j1 = to_json(rep);
    RigidityReport back = report_from_json(j1);
    json j2 = to_json(back);
    EXPECT_EQ(j1.dump(2), j2.dump(2));
    EXPECT_EQ(j1.at("verdict"), "RigidCertified");
    EXPECT_EQ(j1.at("fit").at("family"), "expaffine");
    EXPECT_EQ(j1.at("perC").size(), 3u);
}

TEST(ReportJson, RoundTripWithoutFit) {
    RigidityReport rep;
    rep.input = "mystery.csv";
    rep.cList = {0.5, 2.0};
    rep.seed = 7;
    rep.rigidityCase = RigidityCase::indeterminate("profile finite with no zero");
    rep.verdict = Verdict::Unknown;
    rep.verdictReason = "no fit, but a witness was found at some scale";
    PerScaleResult p;
    p.c = 2.0;
    p.method = "translationSearch";
    p.haveWitness = true;
    p.check.pass = true;
    p.check.iso = Isometry3::translation({-0.5, 0, 1});
    p.check.residualMax = 1e-9;
    p.check.residualRms = 2e-10;
    p.check.coverage = 0.9;
    rep.perScale.push_back(p);
    json j1 = to_json(rep);
    json j2 = to_json(report_from_json(j1));
    EXPECT_EQ(j1.dump(), j2.dump());
    EXPECT_FALSE(j1.contains("fit"));
    EXPECT_EQ(j1.at("case").at("case"), "indeterminate");
}

TEST(ReportJson, CaseSerializationCoversAllKinds) {
    for (const RigidityCase& rc :
         {RigidityCase::caseA(1.2, 0.5), RigidityCase::caseB(), RigidityCase::caseC(2.1),
          RigidityCase::caseD(0.3, 1.4), RigidityCase::indeterminate("why")}) {
        json j = to_json(rc);
        RigidityCase back = case_from_json(j);
        EXPECT_EQ(to_json(back).dump(), j.dump());
    }
}

TEST(FunctionFile, ExpressionBodyWithRotation) {
    auto f = parse_function_file_text(
        "# comment\n"
        "f(x,y) = exp(x) + y\n"
        "rotation_z = 0.5\n");
    FunctionSpec want = rotate_about_z(FunctionSpec(Expression::parse("exp(x)+y")), 0.5);
    EXPECT_NEAR(f.eval(0.3, -0.7), want.eval(0.3, -0.7), 1e-12);
}

TEST(FunctionFile, AffineFamilyBody) {
    auto f = parse_function_file_text("family = affine\na = 1\nb = 2\nd = -1\n");
    EXPECT_DOUBLE_EQ(f.eval(1.0, 1.0), 2.0);
    ASSERT_NE(f.bodyAs<Affine>(), nullptr);
}

TEST(FunctionFile, ExpStripFamilyBody) {
    auto f = parse_function_file_text(
        "family = expstrip\n"
        "a = 1\n"
        "k = 2\n"
        "s(y) = 2 + cos(y)\n");
    EXPECT_NEAR(f.eval(0.5, 0.0), 1.0 + 3.0 * std::exp(1.0), 1e-12);
}

TEST(FunctionFile, ExpAffineFamilyBody) {
    auto f = parse_function_file_text("family = expaffine\na = 0\nb = 1\nd = 1\nk = 1\n");
    EXPECT_NEAR(f.eval(1.0, 2.0), std::exp(1.0) + 2.0, 1e-12);
}

TEST(FunctionFile, ZeroExponentRejectedAtItsLine) {
    try {
        parse_function_file_text("family = expaffine\nb = 1\nd = 1\nk = 0\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 4u);
    }
}

TEST(FunctionFile, RejectsBadInput) {
    EXPECT_THROW(parse_function_file_text("wat = 1\n"), ParseError);
    EXPECT_THROW(parse_function_file_text("f(x,y) = x\nfamily = affine\n"), ParseError);
    EXPECT_THROW(parse_function_file_text("family = cubic\n"), ParseError);
    EXPECT_THROW(parse_function_file_text("family = expstrip\nk = 1\n"), ParseError);
    EXPECT_THROW(parse_function_file_text("f(x,y) =\n"), ParseError);
    EXPECT_THROW(parse_function_file_text(""), ParseError);
    EXPECT_THROW(parse_function_file_text("a = zebra\n"), ParseError);
}

TEST(GridCsv, RoundTripsAffineSurface) {
    std::ostringstream csv;
    csv << "x,y,z\n";
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 5; ++i) {
            double x = -1.0 + 0.5 * i, y = 2.0 + 0.25 * j;
            csv << x << ',' << y << ',' << (1.0 + 2.0 * x - y) << '\n';
        }
    auto f = parse_grid_csv_text(csv.str());
    // bilinear interpolation reproduces an affine surface exactly
    EXPECT_NEAR(f.eval(-0.3, 2.4), 1.0 + 2.0 * -0.3 - 2.4, 1e-12);
    EXPECT_NEAR(f.eval(1.0, 2.75), 1.0 + 2.0 - 2.75, 1e-12);
    EXPECT_THROW(f.eval(5.0, 2.4), OutOfDomain);
}

TEST(GridCsv, RejectsMalformedLattices) {
    EXPECT_THROW(parse_grid_csv_text("a,b\n1,2\n"), ParseError);
    EXPECT_THROW(parse_grid_csv_text("x,y,z\n0,0,1\n1,0,2\n"), ParseError);
    try {
        // second row of the lattice is missing its last point
        parse_grid_csv_text("x,y,z\n0,0,1\n1,0,2\n2,0,3\n0,1,1\n1,1,2\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_GE(e.line, 5u);
    }
}

TEST(ProfileCsv, HeaderAndShape) {
    FunctionSpec f(Affine{0, 1, 0});
    auto prof = estimate_h3_profile(f, {Window::square(1), Window::square(2), Window::square(3)},
                                    72, 16, 3);
    std::string csv = profile_csv(prof);
    std::istringstream in(csv);
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line, "theta,top,bottom,topSaturated,bottomSaturated");
    int n = 0;
    while (std::getline(in, line)) ++n;
    EXPECT_EQ(n, 72);
    EXPECT_EQ(csv, profile_csv(prof));
}

TEST(SampleCsv, HeaderAndValuesRoundTrip) {
    FunctionSpec f(Expression::parse("exp(x)+y"));
    auto s = sample_direction_set(f, Window(-2, 2, -2, 2), 50, 4);
    std::string csv = sample_csv(s);
    std::istringstream in(csv);
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line, "x,y,z");
    std::size_t idx = 0;
    while (std::getline(in, line)) {
        ASSERT_LT(idx, s.directions.size());
        std::istringstream ls(line);
        std::string fx, fy, fz;
        std::getline(ls, fx, ',');
        std::getline(ls, fy, ',');
        std::getline(ls, fz);
        EXPECT_EQ(std::strtod(fx.c_str(), nullptr), s.directions[idx].v.x);
        EXPECT_EQ(std::strtod(fy.c_str(), nullptr), s.directions[idx].v.y);
        EXPECT_EQ(std::strtod(fz.c_str(), nullptr), s.directions[idx].v.z);
        ++idx;
    }
    EXPECT_EQ(idx, s.directions.size());
}

TEST(Raster, ConstantFunctionMarksOnlyTheEquatorRow) {
    FunctionSpec f(Affine{2, 0, 0});
    auto s = sample_direction_set(f, Window(-1, 1, -1, 1), 100, 1);
    std::string pgm = render_raster(s, 64, 32);
    std::istringstream in(pgm);
    std::string magic;
    int w, h, maxv;
    in >> magic >> w >> h >> maxv;
    EXPECT_EQ(magic, "P2");
    EXPECT_EQ(w, 64);
    EXPECT_EQ(h, 32);
    EXPECT_EQ(maxv, 255);
    for (int r = 0; r < h; ++r) {
        int rowMax = 0, v;
        for (int c = 0; c < w; ++c) {
            in >> v;
            rowMax = std::max(rowMax, v);
        }
        if (r == h / 2)
            EXPECT_EQ(rowMax, 255) << "equator row empty";
        else
            EXPECT_EQ(rowMax, 0) << "row " << r;
    }
}

TEST(Raster, DeterministicAndValidatesArguments) {
    FunctionSpec f(Affine{0, 1, 0});
    auto s = sample_direction_set(f, Window(-1, 1, -1, 1), 100, 1);
    EXPECT_EQ(render_raster(s), render_raster(s));
    EXPECT_THROW(render_raster(s, 0, 10), UsageError);
}

TEST(Formatting, ShortestRoundTrip) {
    EXPECT_EQ(iodetail::format_double(0.1), "0.1");
    EXPECT_EQ(iodetail::format_double(2.0), "2");
    double third = 1.0 / 3.0;
    EXPECT_EQ(std::strtod(iodetail::format_double(third).c_str(), nullptr), third);
}
