#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "vrigid/function_model.hpp"

namespace vrigid {

enum class Family { Affine, ExpStrip, ExpAffine };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Affine: return "affine";
        case Family::ExpStrip: return "expstrip";
        default: return "expaffine";
    }
}

/// Result of fitting one of the three canonical rigid families, after an
/// unknown rotation about the z-axis.
struct FamilyFit {
    Family family = Family::Affine;
    double theta = 0.0;  // z-rotation of the family frame
    double a = 0.0, b = 0.0, d = 0.0, k = 1.0;
    std::vector<double> sYs, sVals;  // sampled s(y) (ExpStrip only)
    double rms = std::numeric_limits<double>::infinity();
    Window window{-1, 1, -1, 1};

    /// Reconstructs an evaluable spec from the fitted parameters.
    FunctionSpec toFunctionSpec() const {
        switch (family) {
            case Family::Affine:
                return rotate_about_z(FunctionSpec(Affine{a, b, d}), theta);
            case Family::ExpStrip:
                return rotate_about_z(
                    FunctionSpec(ExpStrip{a, k, CurveSpec::fromTable(sYs, sVals)}), theta);
            default:
                return rotate_about_z(FunctionSpec(ExpAffine{a, b, d, k}), theta);
        }
    }
};

namespace fitdetail {

/// Lattice in a rotated frame u = (cos t, sin t), v = u^perp, inscribed in
/// the window for every t.
struct RotatedLattice {
    Vec2 center, u, v;
    double half;                     // half-extent in both rotated axes
    std::vector<double> xs, ys;      // rotated coordinates
    std::vector<std::vector<double>> f;  // f[j][i] at center + xs[i] u + ys[j] v

    static RotatedLattice build(const FunctionSpec& spec, const Window& window, double theta,
                                int n) {
        RotatedLattice L;
        L.center = {0.5 * (window.xmin + window.xmax), 0.5 * (window.ymin + window.ymax)};
        L.u = {std::cos(theta), std::sin(theta)};
        L.v = L.u.perp();
        double ex = 0.5 * (window.xmax - window.xmin);
        double ey = 0.5 * (window.ymax - window.ymin);
        L.half = std::min(ex, ey) / std::sqrt(2.0);
        L.xs.resize(n);
        L.ys.resize(n);
        for (int i = 0; i < n; ++i) {
            L.xs[i] = -L.half + 2.0 * L.half * double(i) / double(n - 1);
            L.ys[i] = L.xs[i];
        }
        L.f.assign(n, std::vector<double>(n, 0.0));
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                L.f[j][i] = spec.eval(L.center + L.u * L.xs[i] + L.v * L.ys[j]);
        return L;
    }

    Vec2 point(int i, int j) const { return center + u * xs[i] + v * ys[j]; }
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

/// rms of z over all lattice entries.
inline double lattice_rms(const std::vector<std::vector<double>>& r) {
    double s = 0;
    std::size_t n = 0;
    for (const auto& row : r)
        for (double v : row) {
            s += v * v;
            ++n;
        }
    return std::sqrt(s / double(n));
}

struct GoldenResult {
    double x;
    double value;
};

template <class F>
GoldenResult golden_min(F&& fn, double lo, double hi, int iters = 60) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = fn(x1), f2 = fn(x2);
    for (int it = 0; it < iters && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = fn(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = fn(x2);
        }
    }
    double xm = 0.5 * (lo + hi);
    return {xm, fn(xm)};
}

struct ExpStripInner {
    double a = 0, k = 0, rms = std::numeric_limits<double>::infinity();
    std::vector<double> sVals;
    bool ok = false;
};

/// Fits a + s(y) e^{kx} on a rotated lattice for a fixed frame. Exponents
/// below kFloor are rejected: the family degenerates to near-affine surfaces
/// as k -> 0 and those must not count as exponential fits.
inline ExpStripInner fit_exp_strip_inner(const RotatedLattice& L, double epsFloorRel,
                                         double kFloor = 1e-6) {
    const int n = int(L.xs.size());
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    for (const auto& row : L.f)
        for (double v : row) {
            fmin = std::min(fmin, v);
            fmax = std::max(fmax, v);
        }
    const double range = fmax - fmin;
    const double floor = std::max(epsFloorRel * range, 1e-300);

    auto regressK = [&](double a) -> std::optional<double> {
        std::vector<double> ks;
        for (int j = 0; j < n; ++j) {
            // use the entries clearly above the floor; the far half of the
            // window underflows for large |k| and carries no slope signal
            std::vector<int> used;
            int sign = 0;
            bool mixed = false;
            for (int i = 0; i < n; ++i) {
                double z = L.f[j][i] - a;
                if (std::abs(z) <= floor) continue;
                int s = z > 0 ? 1 : -1;
                if (sign == 0) sign = s;
                if (s != sign) mixed = true;
                used.push_back(i);
            }
            if (mixed || int(used.size()) < std::max(4, n / 4)) continue;
            // least squares of log|z| on x over the used entries
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (int i : used) {
                double lx = L.xs[i], ly = std::log(std::abs(L.f[j][i] - a));
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            double m = double(used.size());
            double denom = m * sxx - sx * sx;
            if (denom == 0) continue;
            ks.push_back((m * sxy - sx * sy) / denom);
        }
        if (ks.empty()) return std::nullopt;
        return median(ks);
    };

    auto solveS = [&](double a, double k) {
        std::vector<double> s(n, 0.0);
        for (int j = 0; j < n; ++j) {
            double num = 0, den = 0;
            for (int i = 0; i < n; ++i) {
                double e = std::exp(k * L.xs[i]);
                num += (L.f[j][i] - a) * e;
                den += e * e;
            }
            s[j] = den > 0 ? num / den : 0.0;
        }
        return s;
    };

    auto rmsOf = [&](double a, double k, const std::vector<double>& s) {
        double acc = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double r = L.f[j][i] - a - s[j] * std::exp(k * L.xs[i]);
                acc += r * r;
            }
        return std::sqrt(acc / double(n * n));
    };

    ExpStripInner best;
    // a candidates: the horizontal asymptote sits at one of the two u-edges
    for (int edge : {0, n - 1}) {
        std::vector<double> edgeVals;
        for (int j = 0; j < n; ++j) edgeVals.push_back(L.f[j][edge]);
        double a = median(edgeVals);
        auto k0 = regressK(a);
        if (!k0 || std::abs(*k0) < kFloor) continue;
        double k = *k0;
        // one round of coordinate descent on a, then re-regress k
        auto rmsAtA = [&](double aa) {
            auto kk = regressK(aa);
            if (!kk || std::abs(*kk) < kFloor) return std::numeric_limits<double>::infinity();
            return rmsOf(aa, *kk, solveS(aa, *kk));
        };
        double spanA = 0.5 * (std::abs(a) + range) + 1e-6;
        auto ga = golden_min(rmsAtA, a - spanA, a + spanA, 48);
        if (std::isfinite(ga.value) && ga.value < rmsOf(a, k, solveS(a, k))) a = ga.x;
        auto k1 = regressK(a);
        if (!k1 || std::abs(*k1) < kFloor) continue;
        k = *k1;
        // polish k against the actual residual
        auto rmsAtK = [&](double kk) { return rmsOf(a, kk, solveS(a, kk)); };
        auto gk = golden_min(rmsAtK, k - 0.25 * std::abs(k), k + 0.25 * std::abs(k), 60);
        if (gk.value < rmsAtK(k)) k = gk.x;
        if (std::abs(k) < kFloor) continue;
        auto s = solveS(a, k);
        double r = rmsOf(a, k, s);
        if (r < best.rms) {
            best = {a, k, r, s, true};
        }
    }
    return best;
}

struct ExpAffineInner {
    double a = 0, b = 0, d = 0, k = 0, rms = std::numeric_limits<double>::infinity();
    bool ok = false;
};

/// Fits a + b e^{kx} + dy on a rotated lattice by removing the constant
/// y-slope and running separable nonlinear least squares over k.
inline ExpAffineInner fit_exp_affine_inner(const RotatedLattice& L) {
    const int n = int(L.xs.size());
    // constant y-slope: median of v-direction finite differences (robust to
    // cancellation where the exponential term dominates)
    std::vector<double> dsamples;
    double dy = L.ys[1] - L.ys[0];
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i < n; ++i) dsamples.push_back((L.f[j + 1][i] - L.f[j][i]) / dy);
    double d = median(dsamples);

    // reduce to g(x) = f - d y, pooled over the lattice
    auto fitAB = [&](double k, double& aOut, double& bOut) {
        // shifted basis keeps the exponential bounded by 1
        double xref = k > 0 ? L.xs[n - 1] : L.xs[0];
        double s1 = 0, se = 0, see = 0, sg = 0, sge = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double e = std::exp(k * (L.xs[i] - xref));
                double g = L.f[j][i] - d * L.ys[j];
                s1 += 1;
                se += e;
                see += e * e;
                sg += g;
                sge += g * e;
            }
        double det = s1 * see - se * se;
        if (std::abs(det) < 1e-12 * s1 * see) return false;
        double a = (sg * see - se * sge) / det;
        double bs = (s1 * sge - se * sg) / det;
        aOut = a;
        bOut = bs * std::exp(-k * xref);
        return std::isfinite(aOut) && std::isfinite(bOut);
    };
    auto rmsAtK = [&](double k) {
        double a, b;
        if (!fitAB(k, a, b)) return std::numeric_limits<double>::infinity();
        double acc = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double r = L.f[j][i] - a - b * std::exp(k * L.xs[i]) - d * L.ys[j];
                acc += r * r;
            }
        return std::sqrt(acc / double(n * n));
    };

    double bestK = 0, bestRms = std::numeric_limits<double>::infinity();
    for (int sign : {1, -1}) {
        for (int i = 0; i <= 140; ++i) {
            double mag = 1e-3 * std::pow(20.0 / 1e-3, double(i) / 140.0);
            double k = sign * mag;
            double r = rmsAtK(k);
            if (r < bestRms) {
                bestRms = r;
                bestK = k;
            }
        }
    }
    if (!std::isfinite(bestRms)) return {};
    double lo = bestK > 0 ? bestK / 1.1 : bestK * 1.1;
    double hi = bestK > 0 ? bestK * 1.1 : bestK / 1.1;
    auto g = golden_min(rmsAtK, lo, hi, 70);
    double k = g.value < bestRms ? g.x : bestK;
    if (std::abs(k) < 1e-6) return {};
    ExpAffineInner out;
    out.d = d;
    out.k = k;
    if (!fitAB(k, out.a, out.b)) return {};
    out.rms = rmsAtK(k);
    out.ok = true;
    return out;
}

/// Scans theta candidates, keeping the first strict minimum, then refines by
/// golden section.
template <class InnerRms>
double scan_theta(InnerRms&& rmsAt, int nTheta, double* bestRmsOut) {
    double bestTheta = 0, bestRms = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nTheta; ++i) {
        double th = M_PI * double(i) / double(nTheta);
        double r = rmsAt(th);
        if (r < bestRms) {
            bestRms = r;
            bestTheta = th;
        }
    }
    double span = M_PI / double(nTheta);
    auto g = golden_min(rmsAt, bestTheta - span, bestTheta + span, 60);
    if (g.value < bestRms) {
        bestTheta = g.x;
        bestRms = g.value;
    }
    if (bestTheta < 0) bestTheta += M_PI;
    if (bestRmsOut) *bestRmsOut = bestRms;
    return bestTheta;
}

}  // namespace fitdetail

/// Least-squares plane through the sampled graph.
inline FamilyFit fit_affine(const FunctionSpec& spec, const Window& window) {
    double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0, s1 = 0;
    double sxz = 0, syz = 0, sz = 0;
    for (int j = 0; j < window.ny; ++j)
        for (int i = 0; i < window.nx; ++i) {
            double x = window.xAt(i), y = window.yAt(j), z = spec.eval(x, y);
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
            sx += x;
            sy += y;
            s1 += 1;
            sxz += x * z;
            syz += y * z;
            sz += z;
        }
    // normal equations for z = a + b x + d y
    Mat3 M;
    M.m = {s1, sx, sy, sx, sxx, sxy, sy, sxy, syy};
    Vec3 rhs{sz, sxz, syz};
    Vec3 abd = M.inverse() * rhs;

    FamilyFit fit;
    fit.family = Family::Affine;
    fit.theta = 0.0;
    fit.a = abd.x;
    fit.b = abd.y;
    fit.d = abd.z;
    fit.window = window;
    double acc = 0;
    for (int j = 0; j < window.ny; ++j)
        for (int i = 0; i < window.nx; ++i) {
            double x = window.xAt(i), y = window.yAt(j);
            double r = spec.eval(x, y) - (fit.a + fit.b * x + fit.d * y);
            acc += r * r;
        }
    fit.rms = std::sqrt(acc / double(window.nx * window.ny));
    return fit;
}

/// Fits a + s(y) e^{kx} after an unknown z-rotation.
///
/// Pure exponentials such as c e^{kx} fit exactly in a continuum of frames,
/// with the exponent scaled by the cosine of the frame offset and the rest
/// absorbed into s. When several frames tie at negligible residual, the one
/// with the largest exponent is chosen; it is the axis-aligned representative.
inline FamilyFit fit_exp_strip(const FunctionSpec& spec, const Window& window, int nTheta = 180,
                               int latticeN = 33, double epsFloorRel = 1e-9) {
    using namespace fitdetail;
    const double ex = 0.5 * (window.xmax - window.xmin);
    const double ey = 0.5 * (window.ymax - window.ymin);
    const double kFloor = 1e-3 / (std::min(ex, ey) / std::sqrt(2.0));
    auto innerAt = [&](double th) {
        auto L = RotatedLattice::build(spec, window, th, latticeN);
        return fit_exp_strip_inner(L, epsFloorRel, kFloor);
    };

    double bestRms = std::numeric_limits<double>::infinity(), bestTheta = 0;
    std::vector<std::pair<double, ExpStripInner>> candidates;
    for (int i = 0; i < nTheta; ++i) {
        double th = M_PI * double(i) / double(nTheta);
        auto inner = innerAt(th);
        if (!inner.ok) continue;
        candidates.push_back({th, inner});
        if (inner.rms < bestRms) {
            bestRms = inner.rms;
            bestTheta = th;
        }
    }
    if (!std::isfinite(bestRms)) throw FitFailed("no theta candidate yields a finite exp-strip fit");

    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    for (int j = 0; j < window.ny; ++j)
        for (int i = 0; i < window.nx; ++i) {
            double z = spec.eval(window.xAt(i), window.yAt(j));
            fmin = std::min(fmin, z);
            fmax = std::max(fmax, z);
        }
    const double tieFloor = std::max(bestRms * 1.01, 1e-9 * (1.0 + fmax - fmin));
    int ties = 0;
    double thetaStar = bestTheta, kStar = 0;
    for (const auto& [th, inner] : candidates)
        if (inner.rms <= tieFloor) {
            ++ties;
            if (std::abs(inner.k) > std::abs(kStar)) {
                kStar = inner.k;
                thetaStar = th;
            }
        }

    const double span = M_PI / double(nTheta);
    double theta;
    if (ties >= 3) {
        auto negAbsK = [&](double th) {
            auto inner = innerAt(th);
            return (inner.ok && inner.rms <= tieFloor) ? -std::abs(inner.k)
                                                       : std::numeric_limits<double>::infinity();
        };
        auto g = golden_min(negAbsK, thetaStar - span, thetaStar + span, 50);
        theta = std::isfinite(g.value) ? g.x : thetaStar;
    } else {
        auto rmsAt = [&](double th) {
            auto inner = innerAt(th);
            return inner.ok ? inner.rms : std::numeric_limits<double>::infinity();
        };
        auto g = golden_min(rmsAt, bestTheta - span, bestTheta + span, 60);
        theta = g.value < bestRms ? g.x : bestTheta;
    }

    auto L = RotatedLattice::build(spec, window, theta, latticeN);
    auto inner = fit_exp_strip_inner(L, epsFloorRel, kFloor);
    if (!inner.ok) throw FitFailed("exp-strip fit degenerated during refinement");

    FamilyFit fit;
    fit.family = Family::ExpStrip;
    fit.theta = theta;
    fit.a = inner.a;
    fit.k = inner.k;
    fit.sYs = L.ys;
    fit.sVals = inner.sVals;
    fit.rms = inner.rms;
    fit.window = window;
    // canonical form k > 0: rotating the frame by pi negates k and mirrors s
    if (fit.k < 0) {
        fit.k = -fit.k;
        fit.theta += fit.theta < M_PI ? M_PI : -M_PI;
        std::reverse(fit.sVals.begin(), fit.sVals.end());
    }
    return fit;
}

/// Fits a + b e^{kx} + d y after an unknown z-rotation.
inline FamilyFit fit_exp_affine(const FunctionSpec& spec, const Window& window, int nTheta = 180,
                                int latticeN = 33) {
    using namespace fitdetail;
    auto rmsAt = [&](double th) {
        auto L = RotatedLattice::build(spec, window, th, latticeN);
        auto inner = fit_exp_affine_inner(L);
        return inner.ok ? inner.rms : std::numeric_limits<double>::infinity();
    };
    double bestRms;
    double theta = scan_theta(rmsAt, nTheta, &bestRms);
    if (!std::isfinite(bestRms))
        throw FitFailed("no theta candidate yields a finite exp-affine fit");

    auto L = RotatedLattice::build(spec, window, theta, latticeN);
    auto inner = fit_exp_affine_inner(L);
    if (!inner.ok) throw FitFailed("exp-affine fit degenerated during refinement");

    FamilyFit fit;
    fit.family = Family::ExpAffine;
    fit.theta = theta;
    fit.a = inner.a;
    fit.b = inner.b;
    fit.d = inner.d;
    fit.k = inner.k;
    fit.rms = inner.rms;
    fit.window = window;
    // canonical form k > 0: rotating the frame by pi negates both k and d
    if (fit.k < 0) {
        fit.k = -fit.k;
        fit.d = -fit.d;
        fit.theta += fit.theta < M_PI ? M_PI : -M_PI;
    }
    return fit;
}

/// Runs all three fits; returns the accepted one (rms below threshold),
/// preferring fewer free parameters on ties within 10%.
inline std::optional<FamilyFit> best_family(const FunctionSpec& spec, const Window& window,
                                            double acceptRel = 1e-6) {
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    for (int j = 0; j < window.ny; ++j)
        for (int i = 0; i < window.nx; ++i) {
            double z = spec.eval(window.xAt(i), window.yAt(j));
            fmin = std::min(fmin, z);
            fmax = std::max(fmax, z);
        }
    double range = fmax - fmin;
    double threshold = acceptRel * (range > 0 ? range : 1e-6);

    std::vector<FamilyFit> accepted;
    auto consider = [&](auto&& run) {
        try {
            FamilyFit f = run();
            if (f.rms < threshold) accepted.push_back(std::move(f));
        } catch (const FitFailed&) {
        }
    };
    consider([&] { return fit_affine(spec, window); });
    consider([&] { return fit_exp_affine(spec, window); });
    consider([&] { return fit_exp_strip(spec, window); });
    if (accepted.empty()) return std::nullopt;

    double minRms = std::numeric_limits<double>::infinity();
    for (const auto& f : accepted) minRms = std::min(minRms, f.rms);
    double slack = std::max(minRms * 1.1, 1e-9 * (1.0 + range));
    auto rank = [](Family f) {
        return f == Family::Affine ? 0 : (f == Family::ExpAffine ? 1 : 2);
    };
    const FamilyFit* pick = nullptr;
    for (const auto& f : accepted) {
        if (f.rms > slack) continue;
        if (!pick || rank(f.family) < rank(pick->family)) pick = &f;
    }
    if (!pick) {
        for (const auto& f : accepted)
            if (f.rms == minRms) pick = &f;
    }
    return *pick;
}

}  // namespace vrigid
