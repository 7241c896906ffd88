// vrigid: vertical-rigidity analyzer for functions f(x, y).
//
// Subcommands: analyze (full pipeline), classify, fit, verify, render.
// Exit codes: 0 certified rigid, 2 evidence against rigidity, 3 unknown,
// 1 usage or input errors.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vrigid/io.hpp"
#include "vrigid/report.hpp"
#include "vrigid/verify.hpp"

namespace {

struct CommonArgs {
    std::string fExpr, specPath, gridPath;
    std::vector<double> window;  // xmin xmax ymin ymax
    int ladder = 3;
    int bins = 360;
    int pairs = 1000;
    std::string cListText = "0.5,2,10";
    std::uint64_t seed = 20260825;
    std::string outPath, profilePath, rasterPath;
    std::vector<std::string> tolOverrides;
    int rasterWidth = 720;
    int rasterHeight = 360;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--f", a.fExpr, "Function as an expression in x and y");
    cmd->add_option("--spec", a.specPath, "Function description file (key = value lines)");
    cmd->add_option("--grid", a.gridPath, "Sampled surface as CSV with header x,y,z");
    cmd->add_option("--window", a.window, "Analysis window: xmin xmax ymin ymax (default -3 3 -3 3)")
        ->expected(4);
    cmd->add_option("--ladder", a.ladder, "Number of nested windows for saturation detection")
        ->default_val(3);
    cmd->add_option("--bins", a.bins, "Azimuth bins for the h3 profile")->default_val(360);
    cmd->add_option("--pairs", a.pairs, "Chord pairs for direction sampling")->default_val(1000);
    cmd->add_option("--c-list", a.cListText, "Comma-separated scales c to verify")
        ->default_val("0.5,2,10");
    cmd->add_option("--seed", a.seed, "RNG seed; fixes all sampled outputs")
        ->default_val(20260825);
    cmd->add_option("--out", a.outPath, "Write the JSON report here (default: stdout)");
    cmd->add_option("--profile", a.profilePath, "Write the profile CSV here");
    cmd->add_option("--raster", a.rasterPath, "Write the direction raster (plain graymap) here");
    cmd->add_option("--raster-size", a.rasterWidth, "Raster width; height is width/2")
        ->default_val(720);
    cmd->add_option("--tol", a.tolOverrides,
                    "Tolerance override key=value; keys: epsPole tauLsc tauCvx tauZero tolBase "
                    "coverageMin growthFactor fitAcceptRel affineTol");
}

vrigid::FunctionSpec load_spec(const CommonArgs& a) {
    int given = (!a.fExpr.empty()) + (!a.specPath.empty()) + (!a.gridPath.empty());
    if (given != 1)
        throw vrigid::UsageError("provide exactly one of --f, --spec, --grid");
    if (!a.fExpr.empty()) return vrigid::FunctionSpec(vrigid::Expression::parse(a.fExpr));
    if (!a.specPath.empty()) return vrigid::parse_function_file(a.specPath);
    return vrigid::parse_grid_csv(a.gridPath);
}

std::string input_label(const CommonArgs& a) {
    if (!a.fExpr.empty()) return a.fExpr;
    if (!a.specPath.empty()) return a.specPath;
    return a.gridPath;
}

std::vector<double> parse_c_list(const std::string& text) {
    std::vector<double> cs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        double c = std::stod(item);
        if (!(c > 0.0)) throw vrigid::UsageError("every c in --c-list must be positive");
        cs.push_back(c);
    }
    if (cs.empty()) throw vrigid::UsageError("--c-list must contain at least one scale");
    return cs;
}

vrigid::AnalysisOptions build_options(const CommonArgs& a) {
    vrigid::AnalysisOptions opt;
    if (!a.window.empty())
        opt.window = vrigid::Window(a.window[0], a.window[1], a.window[2], a.window[3]);
    if (a.ladder < 1) throw vrigid::UsageError("--ladder must be >= 1");
    opt.ladder.clear();
    for (int r = 1; r <= a.ladder; ++r) {
        double f = double(r) / double(a.ladder);
        double cx = 0.5 * (opt.window.xmin + opt.window.xmax);
        double cy = 0.5 * (opt.window.ymin + opt.window.ymax);
        double hx = 0.5 * (opt.window.xmax - opt.window.xmin) * f;
        double hy = 0.5 * (opt.window.ymax - opt.window.ymin) * f;
        opt.ladder.push_back(vrigid::Window(cx - hx, cx + hx, cy - hy, cy + hy));
    }
    opt.nbins = a.bins;
    opt.npairs = a.pairs;
    opt.seed = a.seed;
    opt.plan.cList = parse_c_list(a.cListText);

    for (const auto& kv : a.tolOverrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw vrigid::UsageError("--tol expects key=value, got '" + kv + "'");
        std::string key = kv.substr(0, eq);
        double val = std::stod(kv.substr(eq + 1));
        if (key == "epsPole") opt.audit.epsPole = val;
        else if (key == "tauLsc") opt.audit.tauLsc = val;
        else if (key == "tauCvx") opt.audit.tauCvx = val;
        else if (key == "tauZero") opt.classify.tauZero = val;
        else if (key == "tolBase") opt.plan.tolBase = val;
        else if (key == "coverageMin") opt.plan.coverageMin = val;
        else if (key == "growthFactor") opt.growthFactor = val;
        else if (key == "fitAcceptRel") opt.fitAcceptRel = val;
        else if (key == "affineTol") opt.affineTol = val;
        else throw vrigid::UsageError("unknown --tol key '" + key + "'");
    }
    return opt;
}

void emit(const CommonArgs& a, const std::string& jsonText) {
    if (a.outPath.empty())
        std::cout << jsonText << '\n';
    else
        vrigid::write_file(a.outPath, jsonText + "\n");
}

void write_side_outputs(const CommonArgs& a, const vrigid::H3Profile* profile,
                        const vrigid::DirectionSample* sample) {
    if (!a.profilePath.empty()) {
        if (!profile) throw vrigid::UsageError("--profile needs a command that builds a profile");
        vrigid::write_file(a.profilePath, vrigid::profile_csv(*profile));
    }
    if (!a.rasterPath.empty()) {
        if (!sample) throw vrigid::UsageError("--raster needs a command that samples directions");
        vrigid::write_file(a.rasterPath,
                           vrigid::render_raster(*sample, a.rasterWidth, a.rasterWidth / 2));
    }
}

int verdict_exit(vrigid::Verdict v) {
    switch (v) {
        case vrigid::Verdict::RigidCertified: return 0;
        case vrigid::Verdict::NotRigidEvidence: return 2;
        default: return 3;
    }
}

int run_analyze(const CommonArgs& a) {
    auto spec = load_spec(a);
    auto opt = build_options(a);
    auto res = vrigid::issue_verdict(spec, opt);
    auto rep = vrigid::make_report(input_label(a), opt, res);
    emit(a, vrigid::to_json(rep).dump(2));
    write_side_outputs(a, &res.profile, &res.sample);
    return verdict_exit(res.verdict);
}

int run_classify(const CommonArgs& a) {
    auto spec = load_spec(a);
    auto opt = build_options(a);
    auto sample = vrigid::sample_direction_set(spec, opt.window, opt.npairs, opt.seed);
    auto profile = vrigid::estimate_h3_profile(spec, opt.ladder, opt.nbins, opt.segmentsPerBin,
                                               opt.seed, opt.growthFactor);
    auto audit = vrigid::audit_strip_properties(sample, profile, opt.audit);
    auto affine = vrigid::detect_affine_direction(spec, opt.window, 64, opt.affineTol);
    auto rcase = vrigid::classify_case(profile, affine, opt.classify);
    vrigid::json j{{"input", input_label(a)},
                   {"case", vrigid::to_json(rcase)},
                   {"audit", vrigid::to_json(audit)}};
    emit(a, j.dump(2));
    write_side_outputs(a, &profile, &sample);
    return 0;
}

int run_fit(const CommonArgs& a) {
    auto spec = load_spec(a);
    auto opt = build_options(a);
    auto fit = vrigid::best_family(spec, opt.window, opt.fitAcceptRel);
    vrigid::json j{{"input", input_label(a)}};
    j["fit"] = fit ? vrigid::to_json(*fit) : vrigid::json(nullptr);
    emit(a, j.dump(2));
    write_side_outputs(a, nullptr, nullptr);
    return 0;
}

int run_verify(const CommonArgs& a) {
    auto spec = load_spec(a);
    auto opt = build_options(a);
    opt.npairs = std::min(opt.npairs, 200);  // transport check only needs a light sample
    auto res = vrigid::issue_verdict(spec, opt);
    vrigid::json j{{"input", input_label(a)},
                   {"verdict", vrigid::verdict_name(res.verdict)},
                   {"verdictReason", res.verdictReason},
                   {"perC", vrigid::json::array()}};
    if (res.fit) j["fit"] = vrigid::to_json(*res.fit);
    for (const auto& p : res.perScale) j["perC"].push_back(vrigid::to_json(p));
    emit(a, j.dump(2));
    return verdict_exit(res.verdict);
}

int run_render(const CommonArgs& a) {
    auto spec = load_spec(a);
    auto opt = build_options(a);
    auto sample = vrigid::sample_direction_set(spec, opt.window, opt.npairs, opt.seed);
    auto profile = vrigid::estimate_h3_profile(spec, opt.ladder, opt.nbins, opt.segmentsPerBin,
                                               opt.seed, opt.growthFactor);
    if (a.rasterPath.empty() && a.profilePath.empty()) {
        std::cout << vrigid::render_raster(sample, a.rasterWidth, a.rasterWidth / 2);
        return 0;
    }
    write_side_outputs(a, &profile, &sample);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vertical-rigidity analyzer: estimates the direction set of graph(f), "
                 "classifies its shape, fits the rigid families, and verifies witness "
                 "isometries mapping graph(f) onto graph(cf)."};
    app.require_subcommand(1);

    CommonArgs args;
    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline and emit a report");
    auto* classify = app.add_subcommand("classify", "Profile and classify the direction strip");
    auto* fit = app.add_subcommand("fit", "Fit the three rigid families");
    auto* verify = app.add_subcommand("verify", "Fit, build witnesses, and verify per scale");
    auto* render = app.add_subcommand("render", "Sample directions and render outputs");
    for (auto* cmd : {analyze, classify, fit, verify, render}) add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(args);
        if (classify->parsed()) return run_classify(args);
        if (fit->parsed()) return run_fit(args);
        if (verify->parsed()) return run_verify(args);
        if (render->parsed()) return run_render(args);
    } catch (const vrigid::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
