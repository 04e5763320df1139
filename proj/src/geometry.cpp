#include "writhe_lab/geometry.hpp"

#include <algorithm>

namespace writhe_lab {

double segment_segment_distance(const Vec3& p1, const Vec3& p2,
                                const Vec3& q1, const Vec3& q2) {
    // Standard clamped closest-point computation (Lumelsky).
    const Vec3 d1 = p2 - p1;
    const Vec3 d2 = q2 - q1;
    const Vec3 r = p1 - q1;
    const double a = d1.norm2();
    const double e = d2.norm2();
    const double f = d2.dot(r);

    double s = 0.0, t = 0.0;
    if (a == 0.0 && e == 0.0) {
        return r.norm();
    }
    if (a == 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e == 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            if (denom > 0.0) {
                s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            }
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((p1 + d1 * s) - (q1 + d2 * t)).norm();
}

}  // namespace writhe_lab
