#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace writhe_lab {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Cartesian vector / point in 3-space. Plain value type, double precision.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
    constexpr bool operator!=(const Vec3& o) const { return !(*this == o); }

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    constexpr double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

using Point3 = Vec3;

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.dot(b); }
inline Vec3 cross(const Vec3& a, const Vec3& b) { return a.cross(b); }
inline double norm(const Vec3& v) { return v.norm(); }
inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// (a x b) . c
inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a.cross(b).dot(c);
}

/// Normalize; returns the zero vector if |v| <= eps (caller decides how to react).
inline Vec3 unit(const Vec3& v, double eps = 0.0) {
    const double n = v.norm();
    if (n <= eps) return {0.0, 0.0, 0.0};
    return v / n;
}

/// Rodrigues rotation of v about the unit axis by angle (radians).
inline Vec3 rotate_about(const Vec3& v, const Vec3& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}

/// Signed angle from a to b measured about the unit axis, in (-pi, pi].
/// a and b need not be unit but should be orthogonal-ish to axis for the
/// usual "rotation in the normal plane" reading.
inline double signed_angle(const Vec3& a, const Vec3& b, const Vec3& axis) {
    const double s = triple(a, b, axis);
    const double c = a.dot(b);
    return std::atan2(s, c);
}

/// Minimal rotation carrying unit vector from onto unit vector to, applied to v.
/// Uses the Rodrigues form built from from x to; from == to is the identity.
/// Undefined (returns v unchanged) when from == -to; callers must reject that
/// configuration first.
inline Vec3 transport(const Vec3& v, const Vec3& from, const Vec3& to) {
    const Vec3 w = from.cross(to);
    const double c = from.dot(to);
    const double s2 = w.norm2();
    if (s2 == 0.0) return v;  // parallel (or anti-parallel) tangents
    // rotate v about unit(w) by the angle between from and to
    return v * c + w.cross(v) + w * (w.dot(v) * (1.0 - c) / s2);
}

/// A deterministic unit vector orthogonal to the unit vector n: the first
/// coordinate axis (x, then y, then z) least aligned with n, projected and
/// normalized.
inline Vec3 orthogonal_unit(const Vec3& n) {
    const double ax = std::fabs(n.x), ay = std::fabs(n.y), az = std::fabs(n.z);
    Vec3 e{1.0, 0.0, 0.0};
    if (!(ax <= ay && ax <= az)) {
        e = (ay <= az) ? Vec3{0.0, 1.0, 0.0} : Vec3{0.0, 0.0, 1.0};
    }
    return unit(e - n * e.dot(n));
}

/// Squared distance between point p and segment [a, b].
inline double point_segment_dist2(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double len2 = d.norm2();
    if (len2 == 0.0) return (p - a).norm2();
    double t = (p - a).dot(d) / len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return (p - (a + d * t)).norm2();
}

/// Minimum distance between segments [p1, p2] and [q1, q2].
double segment_segment_distance(const Vec3& p1, const Vec3& p2,
                                const Vec3& q1, const Vec3& q2);

/// Kahan (compensated) accumulator. Deterministic for a fixed add order.
class KahanSum {
public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace writhe_lab
