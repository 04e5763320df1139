#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "writhe_lab/errors.hpp"
#include "writhe_lab/geometry.hpp"

namespace writhe_lab {

/// Closed, oriented polygonal curve in 3-space. Vertices are stored once;
/// edge i runs vertex i -> vertex (i+1 mod n). Immutable after construction.
class PolygonalCurve {
public:
    explicit PolygonalCurve(std::vector<Point3> vertices);

    std::size_t size() const { return vertices_.size(); }
    const Point3& vertex(std::size_t i) const { return vertices_[i]; }
    const std::vector<Point3>& vertices() const { return vertices_; }

    Vec3 edge_vector(std::size_t i) const {
        return vertices_[(i + 1) % vertices_.size()] - vertices_[i];
    }
    double edge_length(std::size_t i) const { return edge_vector(i).norm(); }
    const Point3& edge_start(std::size_t i) const { return vertices_[i]; }
    const Point3& edge_end(std::size_t i) const {
        return vertices_[(i + 1) % vertices_.size()];
    }

    double total_length() const;
    double min_edge_length() const;
    /// Max coordinate extent over all axes; the length scale for tolerances.
    double diameter() const;

    /// Unit bisector of the two adjacent edge directions at vertex i.
    Vec3 vertex_tangent(std::size_t i) const;

    PolygonalCurve reversed() const;

private:
    std::vector<Point3> vertices_;
};

/// A set of closed oriented curves (the components of a link).
/// Components of honest links are pairwise disjoint; configurations at the
/// reconnection limit may touch along coincident anti-parallel edges, so
/// strict disjointness is checked by the operations that need it rather
/// than here.
class CurveSystem {
public:
    CurveSystem() = default;
    explicit CurveSystem(std::vector<PolygonalCurve> components)
        : components_(std::move(components)) {}

    std::size_t size() const { return components_.size(); }
    const PolygonalCurve& component(std::size_t i) const { return components_[i]; }
    const std::vector<PolygonalCurve>& components() const { return components_; }

    std::size_t total_edges() const;
    double diameter() const;

    /// Minimum distance between two components, skipping edge pairs that are
    /// exactly coincident-reversed or share an endpoint (the sanctioned
    /// juxtaposition contacts).
    static double component_clearance(const PolygonalCurve& a, const PolygonalCurve& b);

private:
    std::vector<PolygonalCurve> components_;
};

/// Curve plus one unit framing vector per vertex, orthogonal to the vertex
/// tangent. The parallel-transport closure defect (holonomy) of the underlying
/// curve is recorded explicitly so twist bookkeeping stays auditable.
class Ribbon {
public:
    Ribbon(PolygonalCurve curve, std::vector<Vec3> framing);

    const PolygonalCurve& curve() const { return curve_; }
    const std::vector<Vec3>& framing() const { return framing_; }
    const Vec3& framing_vector(std::size_t i) const { return framing_[i]; }

    /// Signed angle, about the tangent at vertex 0, from the once-around
    /// parallel transport of any vector back to itself. In (-pi, pi].
    double transport_holonomy() const { return holonomy_; }

    /// Pushoff curve with vertices v_i + eps * V_i.
    PolygonalCurve pushoff(double eps) const;

private:
    PolygonalCurve curve_;
    std::vector<Vec3> framing_;
    double holonomy_;
};

/// Ribbon plus a positive scalar flux.
class FluxTube {
public:
    FluxTube(Ribbon ribbon, double flux);

    const Ribbon& ribbon() const { return ribbon_; }
    double flux() const { return flux_; }

private:
    Ribbon ribbon_;
    double flux_;
};

// ---- generators ------------------------------------------------------------

/// Regular n-gon inscribed in the circle of given center, unit normal and
/// radius, oriented counterclockwise when viewed from +normal.
PolygonalCurve make_circle(const Point3& center, const Vec3& normal, double radius,
                           std::size_t n);

/// n-vertex sampling of the (p, q) torus knot
///   ((R + r cos q*t) cos p*t, (R + r cos q*t) sin p*t, r sin q*t)
/// for t uniform on [0, 2pi). Requires p, q >= 1 coprime and R > r > 0.
PolygonalCurve make_torus_knot(int p, int q, double big_radius, double small_radius,
                               std::size_t n);

/// Two interlocked circles with |Lk| = 1; orientations fixed so that
/// make_hopf_link(1.0, 1.0, n) has Lk = +1. separation >= 2*radius gives
/// unlinked circles instead.
CurveSystem make_hopf_link(double separation, double radius, std::size_t n);

/// Reproducible closed polygon: n random unit steps, mean subtracted from
/// each to force closure, rejected and redrawn if any edge degenerates.
PolygonalCurve make_random_closed_polygon(std::size_t n, std::uint64_t seed);

// ---- rigid motions and refinement -------------------------------------------

PolygonalCurve translate(const PolygonalCurve& curve, const Vec3& displacement);
PolygonalCurve rotate(const PolygonalCurve& curve, const Vec3& unit_axis, double angle);
/// Reflection x -> -x.
PolygonalCurve mirror_x(const PolygonalCurve& curve);

/// Arc-length uniform resampling with m vertices, phase anchored at vertex 0.
PolygonalCurve resample(const PolygonalCurve& curve, std::size_t m);

// ---- framings ---------------------------------------------------------------

/// Parallel-transport (minimal rotation) framing seeded with V0 at vertex 0.
/// V0 must be orthogonal to the tangent at vertex 0. The holonomy recorded on
/// the result is the closure defect of the transport around the loop.
Ribbon parallel_transport_frame(const PolygonalCurve& curve, const Vec3& v0);

/// Parallel-transport framing rotated by a uniform extra angle per vertex so
/// the framing gains `turns` full turns over the loop.
Ribbon twisted_frame(const PolygonalCurve& curve, const Vec3& v0, int turns);

/// Discrete Frenet framing: V_i = unit(b_i x t_i) with b_i the discrete
/// binormal. Requires no three consecutive vertices collinear.
Ribbon frenet_frame(const PolygonalCurve& curve);

}  // namespace writhe_lab
