#pragma once

// Test-side oracles, kept independent of the library kernels they check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "writhe_lab/curves.hpp"
#include "writhe_lab/geometry.hpp"
#include "writhe_lab/rng.hpp"

namespace oracles {

using writhe_lab::Point3;
using writhe_lab::PolygonalCurve;
using writhe_lab::Vec3;

// Gauss double integral over two segments by adaptive Gauss-Legendre (7-point)
// panels with interval bisection; written independently of the library's
// Simpson fallback.
inline double gauss_integrand(const Point3& a0, const Vec3& da, const Point3& b0,
                              const Vec3& db, double s, double t) {
    const Vec3 r = (a0 + da * s) - (b0 + db * t);
    const double rn = r.norm();
    return writhe_lab::triple(da, db, r) / (rn * rn * rn);
}

inline double gl7_inner(const Point3& a0, const Vec3& da, const Point3& b0,
                        const Vec3& db, double s, double t0, double t1) {
    static const double xs[7] = {-0.9491079123427585, -0.7415311855993945,
                                 -0.4058451513773972, 0.0,
                                 0.4058451513773972,  0.7415311855993945,
                                 0.9491079123427585};
    static const double ws[7] = {0.1294849661688697, 0.2797053914892766,
                                 0.3818300505051189, 0.4179591836734694,
                                 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    double sum = 0.0;
    for (int i = 0; i < 7; ++i) {
        sum += ws[i] * gauss_integrand(a0, da, b0, db, s, mid + half * xs[i]);
    }
    return sum * half;
}

inline double gl7_panel(const Point3& a0, const Vec3& da, const Point3& b0,
                        const Vec3& db, double s0, double s1, double t0, double t1) {
    static const double xs[7] = {-0.9491079123427585, -0.7415311855993945,
                                 -0.4058451513773972, 0.0,
                                 0.4058451513773972,  0.7415311855993945,
                                 0.9491079123427585};
    static const double ws[7] = {0.1294849661688697, 0.2797053914892766,
                                 0.3818300505051189, 0.4179591836734694,
                                 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};
    const double mid = 0.5 * (s0 + s1);
    const double half = 0.5 * (s1 - s0);
    double sum = 0.0;
    for (int i = 0; i < 7; ++i) {
        sum += ws[i] * gl7_inner(a0, da, b0, db, mid + half * xs[i], t0, t1);
    }
    return sum * half;
}

inline double segment_pair_gauss_integral(const Point3& a0, const Point3& a1,
                                          const Point3& b0, const Point3& b1,
                                          double tol = 1e-12, int depth = 14,
                                          double s0 = 0.0, double s1 = 1.0,
                                          double t0 = 0.0, double t1 = 1.0) {
    const Vec3 da = a1 - a0;
    const Vec3 db = b1 - b0;
    const double whole = gl7_panel(a0, da, b0, db, s0, s1, t0, t1);
    const double sm = 0.5 * (s0 + s1), tm = 0.5 * (t0 + t1);
    const double split = gl7_panel(a0, da, b0, db, s0, sm, t0, tm) +
                         gl7_panel(a0, da, b0, db, sm, s1, t0, tm) +
                         gl7_panel(a0, da, b0, db, s0, sm, tm, t1) +
                         gl7_panel(a0, da, b0, db, sm, s1, tm, t1);
    if (depth <= 0 || std::fabs(split - whole) <= tol) return split;
    return segment_pair_gauss_integral(a0, a1, b0, b1, tol * 0.5, depth - 1, s0, sm, t0, tm) +
           segment_pair_gauss_integral(a0, a1, b0, b1, tol * 0.5, depth - 1, sm, s1, t0, tm) +
           segment_pair_gauss_integral(a0, a1, b0, b1, tol * 0.5, depth - 1, s0, sm, tm, t1) +
           segment_pair_gauss_integral(a0, a1, b0, b1, tol * 0.5, depth - 1, sm, s1, tm, t1);
}

// Brute-force signed crossing count of a list of closed polygons projected
// along nu. O(n^2) with no spatial acceleration; the projection counterpart
// of the library's grid-based enumerator. Returns false on any degeneracy.
inline bool brute_force_directional_writhe(const std::vector<PolygonalCurve>& curves,
                                           const Vec3& nu, long* out) {
    const Vec3 u = writhe_lab::orthogonal_unit(nu);
    const Vec3 v = nu.cross(u);
    struct E {
        double ax, ay, bx, by, za, zb;
        Point3 p0, p1;
    };
    std::vector<E> edges;
    double diameter = 0.0;
    std::vector<Point3> all;
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Point3& p0 = c.edge_start(i);
            const Point3& p1 = c.edge_end(i);
            edges.push_back({p0.dot(u), p0.dot(v), p1.dot(u), p1.dot(v), p0.dot(nu),
                             p1.dot(nu), p0, p1});
            all.push_back(p0);
        }
    }
    for (const auto& p : all) {
        for (const auto& q : all) {
            diameter = std::max(diameter, (p - q).norm());
        }
    }
    long total = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const E& e = edges[i];
            const E& f = edges[j];
            if (e.p0 == f.p0 || e.p0 == f.p1 || e.p1 == f.p0 || e.p1 == f.p1) continue;
            const double rx = e.bx - e.ax, ry = e.by - e.ay;
            const double sx = f.bx - f.ax, sy = f.by - f.ay;
            const double denom = rx * sy - ry * sx;
            const double wx = f.ax - e.ax, wy = f.ay - e.ay;
            if (std::fabs(denom) < 1e-12 * std::hypot(rx, ry) * std::hypot(sx, sy)) {
                continue;
            }
            const double t = (wx * sy - wy * sx) / denom;
            const double q = (wx * ry - wy * rx) / denom;
            if (t <= 1e-9 || t >= 1.0 - 1e-9 || q <= 1e-9 || q >= 1.0 - 1e-9) {
                if (t > -1e-9 && t < 1.0 + 1e-9 && q > -1e-9 && q < 1.0 + 1e-9) {
                    return false;  // endpoint graze
                }
                continue;
            }
            const double zi = e.za + t * (e.zb - e.za);
            const double zj = f.za + q * (f.zb - f.za);
            if (std::fabs(zi - zj) < 1e-12 * diameter) return false;
            const bool i_over = zi > zj;
            const double ox = i_over ? rx : sx, oy = i_over ? ry : sy;
            const double ux = i_over ? sx : rx, uy = i_over ? sy : ry;
            total += (ox * uy - oy * ux) > 0.0 ? 1 : -1;
        }
    }
    *out = total;
    return true;
}

// Random simple planar polygon: star-shaped about the origin (sorted angles,
// random radii), optionally rotated out of the coordinate planes.
inline PolygonalCurve random_planar_polygon(std::size_t n, std::uint64_t seed) {
    writhe_lab::Rng rng(seed);
    std::vector<Point3> pts;
    pts.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double jitter = rng.uniform(-0.3, 0.3) / static_cast<double>(n);
        const double theta =
            writhe_lab::kTwoPi * (static_cast<double>(k) / static_cast<double>(n)) +
            jitter;
        const double r = rng.uniform(0.5, 1.5);
        pts.push_back({r * std::cos(theta), r * std::sin(theta), 0.0});
    }
    return PolygonalCurve(std::move(pts));
}

// Smooth closed loop from a low-order random Fourier series; sampling it gives
// polygons that genuinely refine under resampling.
class FourierLoop {
public:
    FourierLoop(std::uint64_t seed, int modes = 3, double amplitude = 0.35) {
        writhe_lab::Rng rng(seed);
        for (int k = 0; k < modes; ++k) {
            const double decay = amplitude / static_cast<double>((k + 1) * (k + 1));
            for (int c = 0; c < 3; ++c) {
                a_[c].push_back(rng.uniform(-decay, decay));
                b_[c].push_back(rng.uniform(-decay, decay));
            }
        }
    }

    Point3 at(double theta) const {
        Point3 p{std::cos(theta), std::sin(theta), 0.0};
        double* comps[3] = {&p.x, &p.y, &p.z};
        for (std::size_t k = 0; k < a_[0].size(); ++k) {
            const double m = static_cast<double>(k + 2);
            for (int c = 0; c < 3; ++c) {
                *comps[c] += a_[c][k] * std::cos(m * theta) + b_[c][k] * std::sin(m * theta);
            }
        }
        return p;
    }

    PolygonalCurve sample(std::size_t n) const {
        std::vector<Point3> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            pts.push_back(at(writhe_lab::kTwoPi * static_cast<double>(i) /
                             static_cast<double>(n)));
        }
        return PolygonalCurve(std::move(pts));
    }

private:
    std::vector<double> a_[3], b_[3];
};

}  // namespace oracles
