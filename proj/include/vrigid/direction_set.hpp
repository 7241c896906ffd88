#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "vrigid/function_model.hpp"
#include "vrigid/sphere.hpp"

namespace vrigid {

struct ChordProvenance {
    Vec2 p, q;  // generating chord endpoints in the plane
};

struct DirectionSample {
    std::vector<SphereDirection> directions;
    std::vector<ChordProvenance> provenance;  // one entry per direction
    std::uint64_t seed = 0;
    Window window{-1, 1, -1, 1};
};

/// Draws npairs distinct point pairs (azimuth-stratified chords with
/// stratified base points) and emits both chord orders. Deterministic per
/// seed.
inline DirectionSample sample_direction_set(const FunctionSpec& spec, const Window& window,
                                            int npairs, std::uint64_t seed) {
    if (npairs < 1) throw UsageError("sample_direction_set requires npairs >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    DirectionSample out;
    out.seed = seed;
    out.window = window;
    out.directions.reserve(2 * std::size_t(npairs));
    out.provenance.reserve(2 * std::size_t(npairs));

    const double wx = window.xmax - window.xmin;
    const double wy = window.ymax - window.ymin;
    const int cells = std::max(1, int(std::sqrt(double(npairs))));

    for (int i = 0; i < npairs; ++i) {
        // stratified azimuth and stratified base cell
        double theta = 2.0 * M_PI * (double(i) + unit(rng)) / double(npairs);
        int cx = i % cells, cy = (i / cells) % cells;
        Vec2 a{window.xmin + wx * (double(cx) + unit(rng)) / double(cells),
               window.ymin + wy * (double(cy) + unit(rng)) / double(cells)};
        Vec2 u{std::cos(theta), std::sin(theta)};

        // clip the ray a + s u to the window, then pick a chord length on it
        double smax = std::numeric_limits<double>::infinity();
        auto clip = [&](double dir, double lo, double hi, double pos) {
            if (dir > 0)
                smax = std::min(smax, (hi - pos) / dir);
            else if (dir < 0)
                smax = std::min(smax, (lo - pos) / dir);
        };
        clip(u.x, window.xmin, window.xmax, a.x);
        clip(u.y, window.ymin, window.ymax, a.y);
        if (!(smax > 0.0) || !std::isfinite(smax)) {
            --i;  // degenerate placement; redraw
            continue;
        }
        // log-ish spread of chord lengths so both local and global slopes appear
        double frac = std::pow(unit(rng), 2.0);
        double len = std::max(smax * frac, smax * 1e-4);
        Vec2 b = a + u * len;

        Vec3 P{a.x, a.y, spec.eval(a)};
        Vec3 Q{b.x, b.y, spec.eval(b)};
        out.directions.push_back(direction_of_chord(Q, P));
        out.provenance.push_back({a, b});
        out.directions.push_back(direction_of_chord(P, Q));
        out.provenance.push_back({b, a});
    }
    return out;
}

/// Per-azimuth top/bottom heights of the direction strip, plus saturation
/// evidence gathered over a ladder of nested windows.
struct H3Profile {
    int nbins = 0;
    std::vector<double> top, bottom;
    std::vector<std::uint8_t> topSaturated, bottomSaturated;
    /// rungMaxSlope[r][j]: max sampled slope in rung r at azimuth bin j.
    std::vector<std::vector<double>> rungMaxSlope;
    std::vector<Window> ladder;
    double growthFactor = 4.0;
    std::uint64_t seed = 0;

    double binTheta(int j) const { return 2.0 * M_PI * (double(j) + 0.5) / double(nbins); }
    int antipodeBin(int j) const { return (j + nbins / 2) % nbins; }
    int binOf(double theta) const {
        double t = std::fmod(theta, 2.0 * M_PI);
        if (t < 0) t += 2.0 * M_PI;
        int j = int(t / (2.0 * M_PI) * double(nbins));
        return std::min(j, nbins - 1);
    }

    bool consistent(double tol = 1e-9) const {
        for (int j = 0; j < nbins; ++j) {
            if (std::abs(bottom[j] + top[antipodeBin(j)]) > tol) return false;
            if (top[j] < bottom[j] - tol) return false;
            if (!(top[j] > -1.0)) return false;
        }
        return true;
    }
};

namespace detail {

/// Max slope of f over segments parallel to u inside the window: stratified
/// anchor lines, whole clipped extents, dyadic subsegments, and short
/// derivative probes near both ends.
inline double max_slope_along(const FunctionSpec& spec, const Window& window, const Vec2& u,
                              int anchorsPerSide, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double best = -std::numeric_limits<double>::infinity();
    const double wx = window.xmax - window.xmin;
    const double wy = window.ymax - window.ymin;

    std::vector<Vec2> anchors;
    for (int i = 0; i < anchorsPerSide; ++i)
        for (int j = 0; j < anchorsPerSide; ++j)
            anchors.push_back({window.xmin + wx * (double(i) + unit(rng)) / anchorsPerSide,
                               window.ymin + wy * (double(j) + unit(rng)) / anchorsPerSide});
    anchors.push_back({window.xmin, window.ymin});
    anchors.push_back({window.xmin, window.ymax});
    anchors.push_back({window.xmax, window.ymin});
    anchors.push_back({window.xmax, window.ymax});
    anchors.push_back({0.5 * (window.xmin + window.xmax), 0.5 * (window.ymin + window.ymax)});

    for (const Vec2& a : anchors) {
        // clip {a + s u : s in R} to the window
        double s0 = -std::numeric_limits<double>::infinity();
        double s1 = std::numeric_limits<double>::infinity();
        auto clip = [&](double dir, double lo, double hi, double pos) {
            if (dir == 0.0) return;
            double t0 = (lo - pos) / dir, t1 = (hi - pos) / dir;
            if (t0 > t1) std::swap(t0, t1);
            s0 = std::max(s0, t0);
            s1 = std::min(s1, t1);
        };
        clip(u.x, window.xmin, window.xmax, a.x);
        clip(u.y, window.ymin, window.ymax, a.y);
        double span = s1 - s0;
        if (!(span > 1e-12) || !std::isfinite(span)) continue;

        auto slopeOf = [&](double sa, double sb) {
            Vec2 pa = a + u * sa, pb = a + u * sb;
            return (spec.eval(pb) - spec.eval(pa)) / (sb - sa);
        };

        best = std::max(best, slopeOf(s0, s1));
        for (double frac : {0.5, 0.125, 0.03125}) {
            double h = span * frac;
            for (int m = 0; m <= 3; ++m) {
                double t = s0 + (span - h) * double(m) / 3.0;
                best = std::max(best, slopeOf(t, t + h));
            }
        }
        double h = std::max(span * 1e-4, 1e-7);
        best = std::max(best, slopeOf(s0, s0 + h));
        best = std::max(best, slopeOf(s1 - h, s1));
    }
    return best;
}

}  // namespace detail

/// Estimates h3 per azimuth bin over a ladder of nested windows. The top of a
/// bin is flagged saturated when the max slope keeps growing decisively
/// across rungs (factor >= growthFactor between consecutive rungs or across
/// the whole ladder); the flagged top is reported as 1.
inline H3Profile estimate_h3_profile(const FunctionSpec& spec, const std::vector<Window>& ladder,
                                     int nbins, int segmentsPerBin, std::uint64_t seed,
                                     double growthFactor = 4.0) {
    if (nbins < 8) throw UsageError("estimate_h3_profile requires nbins >= 8");
    if (nbins % 2 != 0) throw UsageError("estimate_h3_profile requires an even nbins");
    if (ladder.empty()) throw UsageError("estimate_h3_profile requires a nonempty ladder");

    H3Profile prof;
    prof.nbins = nbins;
    prof.ladder = ladder;
    prof.growthFactor = growthFactor;
    prof.seed = seed;
    prof.top.assign(nbins, 0.0);
    prof.bottom.assign(nbins, 0.0);
    prof.topSaturated.assign(nbins, 0);
    prof.bottomSaturated.assign(nbins, 0);
    prof.rungMaxSlope.assign(ladder.size(), std::vector<double>(nbins, 0.0));

    const int anchorsPerSide = std::max(2, int(std::sqrt(double(segmentsPerBin))));

    for (int j = 0; j < nbins; ++j) {
        double theta = prof.binTheta(j);
        Vec2 u{std::cos(theta), std::sin(theta)};
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t(j) + 1)));
        for (std::size_t r = 0; r < ladder.size(); ++r)
            prof.rungMaxSlope[r][j] =
                detail::max_slope_along(spec, ladder[r], u, anchorsPerSide, rng);

        bool saturated = false;
        const auto slopeAt = [&](std::size_t r) { return prof.rungMaxSlope[r][j]; };
        for (std::size_t r = 0; r + 1 < ladder.size(); ++r)
            if (slopeAt(r) > 0.0 && slopeAt(r + 1) >= growthFactor * slopeAt(r)) saturated = true;
        if (ladder.size() >= 2 && slopeAt(0) > 0.0 &&
            slopeAt(ladder.size() - 1) >= growthFactor * slopeAt(0))
            saturated = true;

        prof.topSaturated[j] = saturated ? 1 : 0;
        prof.top[j] = saturated ? 1.0 : slope_to_height(slopeAt(ladder.size() - 1));
    }
    for (int j = 0; j < nbins; ++j) {
        prof.bottom[j] = -prof.top[prof.antipodeBin(j)];
        prof.bottomSaturated[j] = prof.topSaturated[prof.antipodeBin(j)];
    }
    return prof;
}

/// gamma evaluated at nsamples equispaced points of the circle of radius r:
/// the chord direction between (x, f(x)) and (-x, f(-x)).
inline std::vector<SphereDirection> jordan_curve(const FunctionSpec& spec, double r,
                                                 int nsamples) {
    if (!(r > 0.0)) throw UsageError("jordan_curve requires r > 0");
    std::vector<SphereDirection> out;
    out.reserve(nsamples);
    for (int i = 0; i < nsamples; ++i) {
        double t = 2.0 * M_PI * double(i) / double(nsamples);
        Vec2 x{r * std::cos(t), r * std::sin(t)};
        Vec3 p{x.x, x.y, spec.eval(x)};
        Vec3 q{-x.x, -x.y, spec.eval(-x)};
        out.push_back(direction_of_chord(p, q));
    }
    return out;
}

struct AuditTolerances {
    double epsPole = 1e-6;
    double tauLsc = 0.05;
    double tauCvx = 0.02;
    double symmetryTol = 1e-9;
};

struct PropertyCheck {
    std::string name;
    bool pass = true;
    std::vector<int> violations;  // sample or bin indices, depending on the check
};

struct PropertyReport {
    PropertyCheck symmetry, poleExclusion, nonemptiness, lscProxy, convexity;
    bool allPass() const {
        return symmetry.pass && poleExclusion.pass && nonemptiness.pass && lscProxy.pass &&
               convexity.pass;
    }
};

/// Audits the structural properties a direction strip of a continuous
/// function must satisfy. Reports, never throws.
inline PropertyReport audit_strip_properties(const DirectionSample& sample,
                                             const H3Profile& profile,
                                             const AuditTolerances& tol = {}) {
    PropertyReport rep;

    // (1) symmetry: every sampled direction has its antipode in the sample
    rep.symmetry.name = "symmetry";
    {
        auto key = [](const Vec3& v) {
            auto q = [](double x) { return std::llround(x * 1e9); };
            return std::to_string(q(v.x)) + "," + std::to_string(q(v.y)) + "," +
                   std::to_string(q(v.z));
        };
        std::unordered_set<std::string> keys;
        keys.reserve(sample.directions.size() * 2);
        for (const auto& d : sample.directions) keys.insert(key(d.v));
        for (std::size_t i = 0; i < sample.directions.size(); ++i) {
            if (!keys.count(key(-sample.directions[i].v)))
                rep.symmetry.violations.push_back(int(i));
        }
        rep.symmetry.pass = rep.symmetry.violations.empty();
    }

    // (2) pole exclusion
    rep.poleExclusion.name = "pole-exclusion";
    for (std::size_t i = 0; i < sample.directions.size(); ++i)
        if (std::abs(sample.directions[i].v.z) >= 1.0 - tol.epsPole)
            rep.poleExclusion.violations.push_back(int(i));
    rep.poleExclusion.pass = rep.poleExclusion.violations.empty();

    // (3) per-azimuth nonemptiness: profile defined everywhere and the sample
    // covers every coarse sector
    rep.nonemptiness.name = "nonemptiness";
    {
        const int sectors = 36;
        std::vector<int> counts(sectors, 0);
        for (const auto& d : sample.directions) {
            double az = std::atan2(d.v.y, d.v.x);
            if (az < 0) az += 2.0 * M_PI;
            counts[std::min(sectors - 1, int(az / (2.0 * M_PI) * sectors))]++;
        }
        for (int s = 0; s < sectors; ++s)
            if (counts[s] == 0) rep.nonemptiness.violations.push_back(s);
        for (int j = 0; j < profile.nbins; ++j)
            if (!(profile.top[j] >= profile.bottom[j]) || !std::isfinite(profile.top[j]))
                rep.nonemptiness.violations.push_back(sectors + j);
        rep.nonemptiness.pass = rep.nonemptiness.violations.empty();
    }

    // (4) discrete lower-semicontinuity proxy: no isolated upward spike
    rep.lscProxy.name = "lsc-proxy";
    for (int j = 0; j < profile.nbins; ++j) {
        if (profile.topSaturated[j]) continue;
        double left = profile.top[(j + profile.nbins - 1) % profile.nbins];
        double right = profile.top[(j + 1) % profile.nbins];
        if (profile.top[j] > std::max(left, right) + tol.tauLsc)
            rep.lscProxy.violations.push_back(j);
    }
    rep.lscProxy.pass = rep.lscProxy.violations.empty();

    // (5) great-circle convexity in slope space, saturated bins skipped
    rep.convexity.name = "convexity";
    {
        const int n = profile.nbins;
        std::vector<double> m(n, 0.0);
        std::vector<bool> finiteTop(n, false);
        for (int j = 0; j < n; ++j) {
            if (profile.topSaturated[j] || std::abs(profile.top[j]) >= 1.0) continue;
            finiteTop[j] = true;
            m[j] = height_to_slope(profile.top[j]);
        }
        std::vector<bool> flagged(n, false);
        for (int i = 0; i < n; ++i) {
            if (!finiteTop[i]) continue;
            for (int gap = 2; gap < n / 2; ++gap) {
                int j = (i + gap) % n;
                if (!finiteTop[j]) continue;
                double t1 = profile.binTheta(i), t2 = profile.binTheta(i) + 2.0 * M_PI * gap / n;
                double det = std::sin(t2 - t1);
                if (std::abs(det) < 1e-6) continue;
                // g with g.(cos t_i, sin t_i) = m_i
                double gx = (m[i] * std::sin(t2) - m[j] * std::sin(t1)) / det;
                double gy = (m[j] * std::cos(t1) - m[i] * std::cos(t2)) / det;
                for (int s = 1; s < gap; ++s) {
                    int jj = (i + s) % n;
                    if (!finiteTop[jj] || flagged[jj]) continue;
                    double th = t1 + 2.0 * M_PI * s / n;
                    double bound = gx * std::cos(th) + gy * std::sin(th);
                    if (m[jj] > bound + tol.tauCvx) {
                        flagged[jj] = true;
                        rep.convexity.violations.push_back(jj);
                    }
                }
            }
        }
        std::sort(rep.convexity.violations.begin(), rep.convexity.violations.end());
        rep.convexity.pass = rep.convexity.violations.empty();
    }

    return rep;
}

}  // namespace vrigid
