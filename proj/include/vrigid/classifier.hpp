#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vrigid/direction_set.hpp"
#include "vrigid/function_model.hpp"

namespace vrigid {

/// The four strip shapes a rigid function can produce, or Indeterminate.
struct RigidityCase {
    enum class Kind { A, B, C, D, Indeterminate };
    Kind kind = Kind::Indeterminate;
    double azimuth = 0.0;    // A: affine azimuth; C: x0
    double slope = 0.0;      // A only
    double arcStart = 0.0;   // D: interval [arcStart, arcEnd] on S^1
    double arcEnd = 0.0;
    std::string reason;      // Indeterminate only

    static RigidityCase caseA(double azimuth, double slope) {
        RigidityCase r;
        r.kind = Kind::A;
        r.azimuth = azimuth;
        r.slope = slope;
        return r;
    }
    static RigidityCase caseB() {
        RigidityCase r;
        r.kind = Kind::B;
        return r;
    }
    static RigidityCase caseC(double x0) {
        RigidityCase r;
        r.kind = Kind::C;
        r.azimuth = x0;
        return r;
    }
    static RigidityCase caseD(double start, double end) {
        RigidityCase r;
        r.kind = Kind::D;
        r.arcStart = start;
        r.arcEnd = end;
        return r;
    }
    static RigidityCase indeterminate(std::string why) {
        RigidityCase r;
        r.kind = Kind::Indeterminate;
        r.reason = std::move(why);
        return r;
    }

    const char* name() const {
        switch (kind) {
            case Kind::A: return "A";
            case Kind::B: return "B";
            case Kind::C: return "C";
            case Kind::D: return "D";
            default: return "indeterminate";
        }
    }
};

struct AffineDirection {
    double azimuth = 0.0;  // direction of constant slope, radians
    double slope = 0.0;    // the constant slope along that azimuth
};

namespace detail {

/// Slopes of short probe segments parallel to u at stratified base points.
inline std::vector<double> probe_slopes(const FunctionSpec& spec, const Window& window,
                                        double theta, int nprobes) {
    Vec2 u{std::cos(theta), std::sin(theta)};
    const double wx = window.xmax - window.xmin, wy = window.ymax - window.ymin;
    const double h = 0.125 * std::min(wx, wy);
    const int side = std::max(2, int(std::sqrt(double(nprobes))));
    std::vector<double> slopes;
    slopes.reserve(side * side);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            Vec2 a{window.xmin + wx * (i + 0.5) / side, window.ymin + wy * (j + 0.5) / side};
            Vec2 b = a + u * h;
            if (!window.contains(b)) b = a - u * h;
            if (!window.contains(b)) continue;
            slopes.push_back(directional_slope(spec, a, b) * ((b - a).dot(u) > 0 ? 1.0 : -1.0));
        }
    return slopes;
}

inline double slope_spread(const std::vector<double>& s) {
    if (s.empty()) return std::numeric_limits<double>::infinity();
    auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return *hi - *lo;
}

inline double mean(const std::vector<double>& s) {
    double m = 0;
    for (double v : s) m += v;
    return m / double(s.size());
}

}  // namespace detail

/// Searches for an azimuth along which every probed segment has the same
/// slope. Coarse scan of the slope spread over azimuths, golden-section
/// refinement on the best candidate. For planes (spread ~ 0 everywhere) the
/// gradient direction is reported.
inline std::optional<AffineDirection> detect_affine_direction(const FunctionSpec& spec,
                                                              const Window& window, int nprobes,
                                                              double tol) {
    if (!(tol > 0.0)) throw UsageError("detect_affine_direction requires tol > 0");

    auto spreadAt = [&](double th) {
        return detail::slope_spread(detail::probe_slopes(spec, window, th, nprobes));
    };

    const int coarse = 720;
    double bestTheta = 0.0, bestSpread = std::numeric_limits<double>::infinity();
    int flatCount = 0;
    for (int i = 0; i < coarse; ++i) {
        double th = M_PI * double(i) / double(coarse);
        double sp = spreadAt(th);
        if (sp <= tol) ++flatCount;
        if (sp < bestSpread) {
            bestSpread = sp;
            bestTheta = th;
        }
    }

    if (flatCount > coarse / 2) {
        // a plane: every azimuth qualifies; report the gradient direction
        double b = detail::mean(detail::probe_slopes(spec, window, 0.0, nprobes));
        double d = detail::mean(detail::probe_slopes(spec, window, M_PI / 2, nprobes));
        double beta = std::hypot(b, d);
        double az = beta > 0 ? std::atan2(d, b) : 0.0;
        if (az < 0) az += 2.0 * M_PI;
        return AffineDirection{az, beta};
    }

    // golden-section refinement of the spread around the coarse best
    double lo = bestTheta - M_PI / coarse, hi = bestTheta + M_PI / coarse;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = spreadAt(x1), f2 = spreadAt(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = spreadAt(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = spreadAt(x2);
        }
    }
    double theta = 0.5 * (lo + hi);
    auto slopes = detail::probe_slopes(spec, window, theta, nprobes);
    double d = detail::mean(slopes);
    double dev = 0.0;
    for (double s : slopes) dev = std::max(dev, std::abs(s - d));
    if (dev > tol) return std::nullopt;

    if (d < 0) {  // canonical orientation: nonnegative slope
        d = -d;
        theta += M_PI;
    }
    theta = std::fmod(theta, 2.0 * M_PI);
    if (theta < 0) theta += 2.0 * M_PI;
    return AffineDirection{theta, d};
}

struct ClassifierTolerances {
    double tauZero = 0.02;      // |h3| threshold in z-units
    int gapBins = 1;            // contiguity allows gaps of this many bins
    double tauSaturated = 0.05; // off-arc bins this close to the cap count as saturated
    int boundaryBins = 3;       // transition bins tolerated next to an arc endpoint
};

namespace detail {

struct Arc {
    int start;  // first bin of the arc
    int count;  // number of bins (gaps included)
};

/// Groups a circular bin set into contiguous arcs, bridging gaps of at most
/// gapBins.
inline std::vector<Arc> circular_arcs(const std::vector<bool>& in, int gapBins) {
    const int n = int(in.size());
    std::vector<Arc> arcs;
    std::vector<bool> seen(n, false);
    for (int j = 0; j < n; ++j) {
        if (!in[j] || seen[j]) continue;
        // walk backwards to the arc start
        int start = j;
        for (int back = 1; back < n; ++back) {
            bool bridged = false;
            for (int g = 1; g <= gapBins + 1; ++g) {
                int idx = (start - g + 2 * n) % n;
                if (in[idx]) {
                    start = idx;
                    bridged = true;
                    break;
                }
            }
            if (!bridged) break;
        }
        // walk forward to the arc end
        int end = start, len = 1;
        seen[start] = true;
        for (;;) {
            bool bridged = false;
            for (int g = 1; g <= gapBins + 1; ++g) {
                int idx = (end + g) % n;
                if (in[idx] && !seen[idx]) {
                    for (int fill = 1; fill <= g; ++fill) seen[(end + fill) % n] = true;
                    len += g;
                    end = idx;
                    bridged = true;
                    break;
                }
            }
            if (!bridged) break;
        }
        if (len >= n) {
            arcs.clear();
            arcs.push_back({0, n});
            return arcs;
        }
        arcs.push_back({start, len});
    }
    return arcs;
}

}  // namespace detail

/// The decision tree over an h3 profile; necessary-condition patterns only,
/// never a rigidity assertion.
inline RigidityCase classify_case(const H3Profile& profile,
                                  const std::optional<AffineDirection>& affineDir,
                                  const ClassifierTolerances& tol = {}) {
    if (!profile.consistent(1e-9))
        return RigidityCase::indeterminate("profile violates bottom(t) = -top(t+pi)");

    if (affineDir) return RigidityCase::caseA(affineDir->azimuth, affineDir->slope);

    const int n = profile.nbins;
    const double binWidth = 2.0 * M_PI / double(n);
    std::vector<bool> inZ(n, false);
    int zCount = 0, satCount = 0;
    for (int j = 0; j < n; ++j) {
        if (profile.topSaturated[j]) ++satCount;
        if (!profile.topSaturated[j] && std::abs(profile.top[j]) <= tol.tauZero) {
            inZ[j] = true;
            ++zCount;
        }
    }

    if (zCount == 0) {
        bool allSat = true;
        for (int j = 0; j < n; ++j)
            if (!profile.topSaturated[j] || !profile.bottomSaturated[j]) allSat = false;
        if (allSat) return RigidityCase::caseB();
        return RigidityCase::indeterminate("no zero azimuths but unsaturated bins remain");
    }

    auto arcs = detail::circular_arcs(inZ, tol.gapBins);

    // A dominant arc plus stray single bins is one arc with estimator noise at
    // its boundary, not a genuine multi-arc pattern. Drop the strays.
    if (arcs.size() > 1) {
        int maxCount = 0;
        for (const auto& a : arcs) maxCount = std::max(maxCount, a.count);
        if (maxCount >= 5) {
            std::vector<detail::Arc> kept;
            for (const auto& a : arcs)
                if (a.count > tol.gapBins + 1 || 5 * a.count > maxCount) kept.push_back(a);
            arcs = std::move(kept);
        }
    }

    std::vector<bool> covered(n, false);
    for (const auto& a : arcs)
        for (int s = 0; s < a.count; ++s) covered[(a.start + s) % n] = true;
    auto offArcSaturated = [&]() {
        for (int j = 0; j < n; ++j) {
            if (profile.topSaturated[j] || covered[j]) continue;
            // the slope estimator undershoots in bins straddling a boundary of
            // the zero set, so allow nearly-capped values and a narrow band of
            // transition bins around each arc endpoint
            if (profile.top[j] >= 1.0 - tol.tauSaturated) continue;
            int dist = n;
            for (int d = 1; d <= tol.boundaryBins; ++d) {
                if (covered[(j + d) % n] || covered[(j - d + n) % n]) {
                    dist = d;
                    break;
                }
            }
            if (dist > tol.boundaryBins) return false;
        }
        return true;
    };

    if (arcs.size() == 2) {
        // a symmetric pair of antipodal arcs -> Case A, slope 0; they must
        // mirror each other both in extent and in position
        const auto &a0 = arcs[0], &a1 = arcs[1];
        double c0 = a0.start + 0.5 * (a0.count - 1);
        double c1 = a1.start + 0.5 * (a1.count - 1);
        double diff = std::abs(std::remainder(c1 - c0 - 0.5 * n, double(n)));
        bool antipodal = diff <= tol.gapBins + 1 &&
                         std::abs(a0.count - a1.count) <= 2 * (tol.gapBins + 1);
        if (antipodal) {
            double central = profile.binTheta(a0.start) + 0.5 * binWidth * (a0.count - 1);
            return RigidityCase::caseA(central, 0.0);
        }
        return RigidityCase::indeterminate("two non-antipodal zero arcs");
    }

    if (arcs.size() == 1) {
        const auto& arc = arcs[0];
        double length = binWidth * double(arc.count);
        double start = profile.binTheta(arc.start);
        double central = start + 0.5 * binWidth * (arc.count - 1);
        if (length >= M_PI) return RigidityCase::caseA(central, 0.0);
        if (arc.count <= 1 + tol.gapBins) {
            // Case C needs the asymmetric pattern: zero here, saturated antipode
            if (profile.topSaturated[profile.antipodeBin(arc.start)] && offArcSaturated())
                return RigidityCase::caseC(central);
            if (!profile.topSaturated[profile.antipodeBin(arc.start)])
                return RigidityCase::indeterminate("single zero azimuth with unsaturated antipode");
        }
        if (length > 0.0 && length < M_PI && offArcSaturated())
            return RigidityCase::caseD(start, start + binWidth * double(arc.count - 1));
        return RigidityCase::indeterminate("zero arc with unsaturated off-arc bins");
    }

    return RigidityCase::indeterminate("zero set is neither a pair nor a single arc");
}

}  // namespace vrigid
