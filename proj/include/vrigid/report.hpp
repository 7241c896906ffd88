#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vrigid/family_fit.hpp"
#include "vrigid/verify.hpp"

namespace vrigid {

using nlohmann::json;

inline json to_json(const Window& w) {
    return json{{"xmin", w.xmin}, {"xmax", w.xmax}, {"ymin", w.ymin},
                {"ymax", w.ymax}, {"nx", w.nx},     {"ny", w.ny}};
}

inline Window window_from_json(const json& j) {
    return Window(j.at("xmin").get<double>(), j.at("xmax").get<double>(),
                  j.at("ymin").get<double>(), j.at("ymax").get<double>(), j.at("nx").get<int>(),
                  j.at("ny").get<int>());
}

inline json to_json(const Isometry3& iso) {
    return json{{"Q", iso.Q.m}, {"t", {iso.t.x, iso.t.y, iso.t.z}},
                {"orientation", iso.orientation}};
}

inline Isometry3 isometry_from_json(const json& j) {
    Isometry3 iso;
    iso.Q.m = j.at("Q").get<std::array<double, 9>>();
    auto t = j.at("t").get<std::array<double, 3>>();
    iso.t = {t[0], t[1], t[2]};
    iso.orientation = j.at("orientation").get<int>();
    return iso;
}

inline json to_json(const RigidityCase& rc) {
    json params = json::object();
    switch (rc.kind) {
        case RigidityCase::Kind::A:
            params["azimuth"] = rc.azimuth;
            params["slope"] = rc.slope;
            break;
        case RigidityCase::Kind::C: params["x0"] = rc.azimuth; break;
        case RigidityCase::Kind::D:
            params["arcStart"] = rc.arcStart;
            params["arcEnd"] = rc.arcEnd;
            break;
        case RigidityCase::Kind::Indeterminate: params["reason"] = rc.reason; break;
        default: break;
    }
    return json{{"case", rc.name()}, {"params", params}};
}

inline RigidityCase case_from_json(const json& j) {
    std::string name = j.at("case").get<std::string>();
    const json& p = j.at("params");
    if (name == "A")
        return RigidityCase::caseA(p.at("azimuth").get<double>(), p.at("slope").get<double>());
    if (name == "B") return RigidityCase::caseB();
    if (name == "C") return RigidityCase::caseC(p.at("x0").get<double>());
    if (name == "D")
        return RigidityCase::caseD(p.at("arcStart").get<double>(), p.at("arcEnd").get<double>());
    return RigidityCase::indeterminate(p.value("reason", std::string{}));
}

inline json to_json(const FamilyFit& fit) {
    json j{{"family", family_name(fit.family)}, {"theta", fit.theta}, {"a", fit.a},
           {"b", fit.b},                        {"d", fit.d},         {"k", fit.k},
           {"rms", fit.rms},                    {"window", to_json(fit.window)}};
    if (fit.family == Family::ExpStrip) j["s"] = json{{"y", fit.sYs}, {"value", fit.sVals}};
    return j;
}

inline FamilyFit fit_from_json(const json& j) {
    FamilyFit fit;
    std::string fam = j.at("family").get<std::string>();
    fit.family = fam == "affine" ? Family::Affine
                                 : (fam == "expstrip" ? Family::ExpStrip : Family::ExpAffine);
    fit.theta = j.at("theta").get<double>();
    fit.a = j.at("a").get<double>();
    fit.b = j.at("b").get<double>();
    fit.d = j.at("d").get<double>();
    fit.k = j.at("k").get<double>();
    fit.rms = j.at("rms").get<double>();
    fit.window = window_from_json(j.at("window"));
    if (j.contains("s")) {
        fit.sYs = j.at("s").at("y").get<std::vector<double>>();
        fit.sVals = j.at("s").at("value").get<std::vector<double>>();
    }
    return fit;
}

inline json to_json(const PropertyCheck& c) {
    return json{{"name", c.name}, {"pass", c.pass}, {"violations", c.violations}};
}

inline PropertyCheck check_from_json(const json& j) {
    PropertyCheck c;
    c.name = j.at("name").get<std::string>();
    c.pass = j.at("pass").get<bool>();
    c.violations = j.at("violations").get<std::vector<int>>();
    return c;
}

inline json to_json(const PropertyReport& r) {
    return json{{"symmetry", to_json(r.symmetry)},
                {"poleExclusion", to_json(r.poleExclusion)},
                {"nonemptiness", to_json(r.nonemptiness)},
                {"lscProxy", to_json(r.lscProxy)},
                {"convexity", to_json(r.convexity)}};
}

inline PropertyReport audit_from_json(const json& j) {
    PropertyReport r;
    r.symmetry = check_from_json(j.at("symmetry"));
    r.poleExclusion = check_from_json(j.at("poleExclusion"));
    r.nonemptiness = check_from_json(j.at("nonemptiness"));
    r.lscProxy = check_from_json(j.at("lscProxy"));
    r.convexity = check_from_json(j.at("convexity"));
    return r;
}

inline json to_json(const PerScaleResult& p) {
    json j{{"c", p.c},
           {"method", p.method},
           {"pass", p.haveWitness && p.check.pass},
           {"isometry", to_json(p.check.iso)},
           {"residualMax", p.check.residualMax},
           {"residualRms", p.check.residualRms},
           {"coverage", p.check.coverage}};
    if (!std::isnan(p.transportHausdorff)) j["transportHausdorff"] = p.transportHausdorff;
    return j;
}

inline PerScaleResult per_scale_from_json(const json& j) {
    PerScaleResult p;
    p.c = j.at("c").get<double>();
    p.method = j.at("method").get<std::string>();
    p.haveWitness = j.at("pass").get<bool>();
    p.check.c = p.c;
    p.check.pass = p.haveWitness;
    p.check.iso = isometry_from_json(j.at("isometry"));
    p.check.residualMax = j.at("residualMax").get<double>();
    p.check.residualRms = j.at("residualRms").get<double>();
    p.check.coverage = j.at("coverage").get<double>();
    if (j.contains("transportHausdorff"))
        p.transportHausdorff = j.at("transportHausdorff").get<double>();
    return p;
}

/// Everything the CLI writes into the certificate JSON.
struct RigidityReport {
    std::string input;  // expression text or input file path
    Window window{-3, 3, -3, 3};
    int nbins = 360;
    int npairs = 1000;
    std::vector<double> cList;
    std::uint64_t seed = 0;

    // profile summary (the full profile goes to the CSV export)
    int saturatedBins = 0;
    double topMin = 0.0, topMax = 0.0;

    PropertyReport audit;
    RigidityCase rigidityCase;
    std::optional<FamilyFit> fit;
    std::vector<PerScaleResult> perScale;
    Verdict verdict = Verdict::Unknown;
    std::string verdictReason;
};

inline RigidityReport make_report(std::string input, const AnalysisOptions& opt,
                                  const AnalysisResult& res) {
    RigidityReport rep;
    rep.input = std::move(input);
    rep.window = opt.window;
    rep.nbins = opt.nbins;
    rep.npairs = opt.npairs;
    rep.cList = opt.plan.cList;
    rep.seed = opt.seed;
    rep.saturatedBins = 0;
    double tmin = 1.0, tmax = -1.0;
    for (int j = 0; j < res.profile.nbins; ++j) {
        if (res.profile.topSaturated[j]) ++rep.saturatedBins;
        tmin = std::min(tmin, res.profile.top[j]);
        tmax = std::max(tmax, res.profile.top[j]);
    }
    rep.topMin = tmin;
    rep.topMax = tmax;
    rep.audit = res.audit;
    rep.rigidityCase = res.rigidityCase;
    rep.fit = res.fit;
    rep.perScale = res.perScale;
    rep.verdict = res.verdict;
    rep.verdictReason = res.verdictReason;
    return rep;
}

inline json to_json(const RigidityReport& rep) {
    json j{{"input", rep.input},
           {"window", to_json(rep.window)},
           {"nbins", rep.nbins},
           {"npairs", rep.npairs},
           {"cList", rep.cList},
           {"seed", rep.seed},
           {"profile", json{{"saturatedBins", rep.saturatedBins},
                            {"topMin", rep.topMin},
                            {"topMax", rep.topMax}}},
           {"audit", to_json(rep.audit)},
           {"case", to_json(rep.rigidityCase)},
           {"perC", json::array()},
           {"verdict", verdict_name(rep.verdict)},
           {"verdictReason", rep.verdictReason}};
    for (const auto& p : rep.perScale) j["perC"].push_back(to_json(p));
    if (rep.fit) j["fit"] = to_json(*rep.fit);
    return j;
}

inline RigidityReport report_from_json(const json& j) {
    RigidityReport rep;
    rep.input = j.at("input").get<std::string>();
    rep.window = window_from_json(j.at("window"));
    rep.nbins = j.at("nbins").get<int>();
    rep.npairs = j.at("npairs").get<int>();
    rep.cList = j.at("cList").get<std::vector<double>>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.saturatedBins = j.at("profile").at("saturatedBins").get<int>();
    rep.topMin = j.at("profile").at("topMin").get<double>();
    rep.topMax = j.at("profile").at("topMax").get<double>();
    rep.audit = audit_from_json(j.at("audit"));
    rep.rigidityCase = case_from_json(j.at("case"));
    if (j.contains("fit")) rep.fit = fit_from_json(j.at("fit"));
    for (const auto& pj : j.at("perC")) rep.perScale.push_back(per_scale_from_json(pj));
    std::string v = j.at("verdict").get<std::string>();
    rep.verdict = v == "RigidCertified"
                      ? Verdict::RigidCertified
                      : (v == "NotRigidEvidence" ? Verdict::NotRigidEvidence : Verdict::Unknown);
    rep.verdictReason = j.at("verdictReason").get<std::string>();
    return rep;
}

}  // namespace vrigid
