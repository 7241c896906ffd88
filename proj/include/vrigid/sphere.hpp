#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "vrigid/errors.hpp"
#include "vrigid/vec.hpp"

namespace vrigid {

/// Unit vector on S^2. Constructed through normalize() so the invariant
/// | |v| - 1 | <= 1e-12 holds.
struct SphereDirection {
    Vec3 v;

    static SphereDirection normalize(const Vec3& p) {
        double n = p.norm();
        if (n == 0.0) throw DegenerateChord("cannot normalize zero vector");
        return {p * (1.0 / n)};
    }

    SphereDirection antipode() const { return {-v}; }
    double angleTo(const SphereDirection& o) const {
        double d = v.dot(o.v);
        if (d > 1.0) d = 1.0;
        if (d < -1.0) d = -1.0;
        return std::acos(d);
    }
};

/// Rigid motion p -> Q p + t with det(Q) = orientation.
struct Isometry3 {
    Mat3 Q;
    Vec3 t;
    int orientation = 1;

    static Isometry3 identity() { return {Mat3::identity(), {0, 0, 0}, 1}; }

    static Isometry3 translation(const Vec3& t) { return {Mat3::identity(), t, 1}; }

    static Isometry3 rotation(const Mat3& Q) {
        Isometry3 iso{Q, {0, 0, 0}, Q.det() < 0 ? -1 : 1};
        return iso;
    }

    double orthogonalityError() const {
        return (Q.transposed() * Q).maxAbsDiff(Mat3::identity());
    }

    bool valid(double tol = 1e-10) const {
        if (orthogonalityError() > tol) return false;
        return std::abs(Q.det() - static_cast<double>(orientation)) < 1e-6;
    }

    Isometry3 compose(const Isometry3& inner) const {
        // this after inner: p -> Q (Qi p + ti) + t
        return {Q * inner.Q, Q * inner.t + t, orientation * inner.orientation};
    }

    Isometry3 inverse() const {
        Mat3 Qt = Q.transposed();
        return {Qt, -(Qt * t), orientation};
    }
};

inline SphereDirection direction_of_chord(const Vec3& p, const Vec3& q) {
    Vec3 d = p - q;
    if (d.norm() == 0.0) throw DegenerateChord("chord endpoints coincide");
    return SphereDirection::normalize(d);
}

/// The sphere self-map describing how f -> cf deforms the direction set:
/// (x,y,z) -> (x,y,cz)/|(x,y,cz)|. Fixes poles and the equator pointwise.
inline SphereDirection psi(double c, const SphereDirection& dir) {
    if (!(c > 0.0)) throw InvalidScale("psi requires c > 0");
    return SphereDirection::normalize({dir.v.x, dir.v.y, c * dir.v.z});
}

/// arctan(cd) - arctan(d).
inline double alpha_angle(double c, double d) {
    if (!(c > 0.0)) throw InvalidScale("alpha_angle requires c > 0");
    return std::atan(c * d) - std::atan(d);
}

/// w_{c,d} = sqrt((1/(d^2+1)) (1 + 1/(cd)^2)); strictly decreasing in c.
inline double w_coefficient(double c, double d) {
    if (!(c > 0.0) || !(d > 0.0)) throw InvalidScale("w_coefficient requires c, d > 0");
    double cd = c * d;
    return std::sqrt((1.0 / (d * d + 1.0)) * (1.0 + 1.0 / (cd * cd)));
}

inline Mat3 rotation_about_x(double alpha) {
    double ca = std::cos(alpha), sa = std::sin(alpha);
    Mat3 r;
    r.m = {1, 0, 0, 0, ca, -sa, 0, sa, ca};
    return r;
}

inline Mat3 rotation_about_y(double alpha) {
    // Rotates within the xz-plane, taking the direction (1,0,m) toward larger slope
    // for alpha > 0: (x,z) -> (x cos - z sin, x sin + z cos).
    double ca = std::cos(alpha), sa = std::sin(alpha);
    Mat3 r;
    r.m = {ca, 0, -sa, 0, 1, 0, sa, 0, ca};
    return r;
}

inline Mat3 rotation_about_z(double theta) {
    double ct = std::cos(theta), st = std::sin(theta);
    Mat3 r;
    r.m = {ct, -st, 0, st, ct, 0, 0, 0, 1};
    return r;
}

inline Vec3 rotate_about_x(const Vec3& p, double alpha) { return rotation_about_x(alpha) * p; }

/// z = m/sqrt(1+m^2), extended to +-1 at +-infinity.
inline double slope_to_height(double m) {
    if (std::isinf(m)) return m > 0 ? 1.0 : -1.0;
    return m / std::sqrt(1.0 + m * m);
}

/// Inverse of slope_to_height for |z| < 1.
inline double height_to_slope(double z) {
    if (std::abs(z) >= 1.0)
        return z > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
    return z / std::sqrt(1.0 - z * z);
}

inline Vec3 apply_isometry(const Isometry3& iso, const Vec3& p, double tol = 1e-10) {
    if (!iso.valid(tol)) throw NotOrthogonal("isometry fails orthogonality check");
    return iso.Q * p + iso.t;
}

/// Splits iso into (orthogonal part, translation part); translation after
/// orthogonal recomposes the input exactly.
inline std::pair<Isometry3, Isometry3> decompose_isometry(const Isometry3& iso) {
    Isometry3 ort{iso.Q, {0, 0, 0}, iso.orientation};
    Isometry3 trans{Mat3::identity(), iso.t, 1};
    return {ort, trans};
}

/// Nearest-orthogonal repair via Higham's polar iteration. Explicit, never
/// applied silently.
inline Isometry3 reorthonormalize(const Isometry3& iso) {
    Mat3 Q = iso.Q;
    for (int it = 0; it < 50; ++it) {
        Mat3 Qn = Q.inverse().transposed();
        Mat3 next;
        for (std::size_t i = 0; i < 9; ++i) next.m[i] = 0.5 * (Q.m[i] + Qn.m[i]);
        if (next.maxAbsDiff(Q) < 1e-15) {
            Q = next;
            break;
        }
        Q = next;
    }
    return {Q, iso.t, Q.det() < 0 ? -1 : 1};
}

}  // namespace vrigid
