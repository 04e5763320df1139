#include "writhe_lab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "writhe_lab/rng.hpp"

namespace writhe_lab {

namespace {

// Angular tolerance below which consecutive tangents count as anti-parallel
// (ill-defined parallel transport).
constexpr double kAntiParallelTol = 1e-12;

std::string describe_index(const char* what, std::size_t i) {
    std::ostringstream os;
    os << what << " " << i;
    return os.str();
}

}  // namespace

PolygonalCurve::PolygonalCurve(std::vector<Point3> vertices)
    : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
        throw InvalidParameterError("polygonal curve needs at least 3 vertices");
    }
    for (const auto& v : vertices_) {
        if (!v.finite()) throw InvalidParameterError("non-finite vertex coordinate");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i] == vertices_[(i + 1) % vertices_.size()]) {
            throw DegenerateEdgeError(describe_index("zero-length edge at index", i));
        }
    }
}

double PolygonalCurve::total_length() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) sum += edge_length(i);
    return sum;
}

double PolygonalCurve::min_edge_length() const {
    double best = edge_length(0);
    for (std::size_t i = 1; i < size(); ++i) best = std::min(best, edge_length(i));
    return best;
}

double PolygonalCurve::diameter() const {
    Vec3 lo = vertices_[0], hi = vertices_[0];
    for (const auto& v : vertices_) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    return (hi - lo).norm();
}

Vec3 PolygonalCurve::vertex_tangent(std::size_t i) const {
    const std::size_t n = size();
    const Vec3 din = unit(edge_vector((i + n - 1) % n));
    const Vec3 dout = unit(edge_vector(i));
    const Vec3 bis = din + dout;
    const double bn = bis.norm();
    if (bn <= kAntiParallelTol) {
        throw IllDefinedTransportError(
            describe_index("anti-parallel edges meet at vertex", i));
    }
    return bis / bn;
}

PolygonalCurve PolygonalCurve::reversed() const {
    std::vector<Point3> rev(vertices_.rbegin(), vertices_.rend());
    return PolygonalCurve(std::move(rev));
}

std::size_t CurveSystem::total_edges() const {
    std::size_t n = 0;
    for (const auto& c : components_) n += c.size();
    return n;
}

double CurveSystem::diameter() const {
    if (components_.empty()) return 0.0;
    Vec3 lo = components_[0].vertex(0), hi = lo;
    for (const auto& c : components_) {
        for (const auto& v : c.vertices()) {
            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
        }
    }
    return (hi - lo).norm();
}

double CurveSystem::component_clearance(const PolygonalCurve& a, const PolygonalCurve& b) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Point3& a0 = a.edge_start(i);
        const Point3& a1 = a.edge_end(i);
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Point3& b0 = b.edge_start(j);
            const Point3& b1 = b.edge_end(j);
            if ((a0 == b1 && a1 == b0) || a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1) {
                continue;  // coincident-reversed pair or shared junction vertex
            }
            best = std::min(best, segment_segment_distance(a0, a1, b0, b1));
        }
    }
    return best;
}

Ribbon::Ribbon(PolygonalCurve curve, std::vector<Vec3> framing)
    : curve_(std::move(curve)), framing_(std::move(framing)), holonomy_(0.0) {
    const std::size_t n = curve_.size();
    if (framing_.size() != n) {
        throw InvalidParameterError("framing must have one vector per vertex");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(framing_[i].norm() - 1.0) > 1e-12) {
            throw InvalidParameterError(
                describe_index("framing vector not unit at vertex", i));
        }
        if (std::fabs(framing_[i].dot(curve_.vertex_tangent(i))) > 1e-9) {
            throw InvalidParameterError(
                describe_index("framing vector not orthogonal to tangent at vertex", i));
        }
    }
    // Closure defect of parallel transport around the loop: a property of the
    // curve, recorded once so the Tw = T + N bookkeeping can be audited.
    Vec3 v = orthogonal_unit(curve_.vertex_tangent(0));
    const Vec3 v_start = v;
    for (std::size_t i = 0; i < n; ++i) {
        v = transport(v, curve_.vertex_tangent(i), curve_.vertex_tangent((i + 1) % n));
    }
    holonomy_ = signed_angle(v, v_start, curve_.vertex_tangent(0));
}

PolygonalCurve Ribbon::pushoff(double eps) const {
    std::vector<Point3> pts;
    pts.reserve(curve_.size());
    for (std::size_t i = 0; i < curve_.size(); ++i) {
        pts.push_back(curve_.vertex(i) + framing_[i] * eps);
    }
    return PolygonalCurve(std::move(pts));
}

FluxTube::FluxTube(Ribbon ribbon, double flux)
    : ribbon_(std::move(ribbon)), flux_(flux) {
    if (!(flux > 0.0) || !std::isfinite(flux)) {
        throw InvalidParameterError("flux must be finite and positive");
    }
}

// ---- generators ------------------------------------------------------------

PolygonalCurve make_circle(const Point3& center, const Vec3& normal, double radius,
                           std::size_t n) {
    if (n < 3) throw InvalidParameterError("circle needs n >= 3");
    if (!(radius > 0.0)) throw InvalidParameterError("circle needs radius > 0");
    if (std::fabs(normal.norm() - 1.0) > 1e-9) {
        throw InvalidParameterError("circle normal must be a unit vector");
    }
    const Vec3 u = orthogonal_unit(normal);
    const Vec3 v = normal.cross(u);
    std::vector<Point3> pts;
    pts.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        pts.push_back(center + u * (radius * std::cos(th)) + v * (radius * std::sin(th)));
    }
    return PolygonalCurve(std::move(pts));
}

PolygonalCurve make_torus_knot(int p, int q, double big_radius, double small_radius,
                               std::size_t n) {
    if (p < 1 || q < 1) throw InvalidParameterError("torus knot needs p, q >= 1");
    if (std::gcd(p, q) != 1) throw InvalidParameterError("torus knot needs gcd(p, q) = 1");
    if (!(big_radius > small_radius && small_radius > 0.0)) {
        throw InvalidParameterError("torus knot needs R > r > 0");
    }
    if (n < 3) throw InvalidParameterError("torus knot needs n >= 3");
    std::vector<Point3> pts;
    pts.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        const double w = big_radius + small_radius * std::cos(q * t);
        pts.push_back({w * std::cos(p * t), w * std::sin(p * t),
                       small_radius * std::sin(q * t)});
    }
    try {
        return PolygonalCurve(std::move(pts));
    } catch (const DegenerateEdgeError&) {
        throw DegenerateEdgeError("torus knot sampling produced a degenerate edge");
    }
}

CurveSystem make_hopf_link(double separation, double radius, std::size_t n) {
    if (!(radius > 0.0)) throw InvalidParameterError("hopf link needs radius > 0");
    if (!(separation > 0.0)) throw InvalidParameterError("hopf link needs separation > 0");
    const PolygonalCurve a = make_circle({0, 0, 0}, {0, 0, 1}, radius, n);
    // Second circle in the orthogonal xz-plane; the +y normal fixes Lk = +1
    // for the interlocked configuration.
    const PolygonalCurve b =
        make_circle({separation, 0, 0}, {0, 1, 0}, radius, n);
    if (separation < 2.0 * radius) {
        const double clearance = CurveSystem::component_clearance(a, b);
        if (!(clearance > 0.0)) {
            throw DisjointnessError("hopf link parameters produce intersecting circles");
        }
    }
    return CurveSystem({a, b});
}

PolygonalCurve make_random_closed_polygon(std::size_t n, std::uint64_t seed) {
    if (n < 3) throw InvalidParameterError("random polygon needs n >= 3");
    Rng rng(seed);
    constexpr int kMaxAttempts = 64;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<Vec3> steps;
        steps.reserve(n);
        Vec3 mean{0, 0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            steps.push_back(rng.unit_direction());
            mean += steps.back();
        }
        mean = mean / static_cast<double>(n);
        bool ok = true;
        for (auto& s : steps) {
            s -= mean;
            if (s.norm() < 1e-3) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<Point3> pts;
        pts.reserve(n);
        Vec3 pos{0, 0, 0};
        pts.push_back(pos);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            pos += steps[i];
            pts.push_back(pos);
        }
        return PolygonalCurve(std::move(pts));
    }
    throw GenerationFailureError("random polygon rejection limit exceeded");
}

// ---- rigid motions and refinement -------------------------------------------

PolygonalCurve translate(const PolygonalCurve& curve, const Vec3& displacement) {
    std::vector<Point3> pts;
    pts.reserve(curve.size());
    for (const auto& v : curve.vertices()) pts.push_back(v + displacement);
    return PolygonalCurve(std::move(pts));
}

PolygonalCurve rotate(const PolygonalCurve& curve, const Vec3& unit_axis, double angle) {
    std::vector<Point3> pts;
    pts.reserve(curve.size());
    for (const auto& v : curve.vertices()) pts.push_back(rotate_about(v, unit_axis, angle));
    return PolygonalCurve(std::move(pts));
}

PolygonalCurve mirror_x(const PolygonalCurve& curve) {
    std::vector<Point3> pts;
    pts.reserve(curve.size());
    for (const auto& v : curve.vertices()) pts.push_back({-v.x, v.y, v.z});
    return PolygonalCurve(std::move(pts));
}

PolygonalCurve resample(const PolygonalCurve& curve, std::size_t m) {
    if (m < 3) throw InvalidParameterError("resample needs m >= 3");
    const std::size_t n = curve.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + curve.edge_length(i);
    const double total = cum[n];
    std::vector<Point3> pts;
    pts.reserve(m);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(m);
        while (seg + 1 < n && cum[seg + 1] <= target) ++seg;
        const double local = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        pts.push_back(curve.edge_start(seg) + curve.edge_vector(seg) * local);
    }
    return PolygonalCurve(std::move(pts));
}

// ---- framings ---------------------------------------------------------------

namespace {

std::vector<Vec3> transport_chain(const PolygonalCurve& curve, const Vec3& v0) {
    const std::size_t n = curve.size();
    const Vec3 t0 = curve.vertex_tangent(0);
    if (std::fabs(v0.norm() - 1.0) > 1e-9 || std::fabs(v0.dot(t0)) > 1e-9) {
        throw InvalidParameterError(
            "seed framing vector must be unit and orthogonal to the tangent at vertex 0");
    }
    std::vector<Vec3> frame;
    frame.reserve(n);
    frame.push_back(unit(v0 - t0 * v0.dot(t0)));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Vec3 ti = curve.vertex_tangent(i);
        const Vec3 tn = curve.vertex_tangent(i + 1);
        Vec3 v = transport(frame.back(), ti, tn);
        // renormalize against drift and keep exactly orthogonal to the tangent
        v = unit(v - tn * v.dot(tn));
        frame.push_back(v);
    }
    return frame;
}

}  // namespace

Ribbon parallel_transport_frame(const PolygonalCurve& curve, const Vec3& v0) {
    return Ribbon(curve, transport_chain(curve, v0));
}

Ribbon twisted_frame(const PolygonalCurve& curve, const Vec3& v0, int turns) {
    std::vector<Vec3> frame = transport_chain(curve, v0);
    const std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double angle =
            kTwoPi * static_cast<double>(turns) * static_cast<double>(i) / static_cast<double>(n);
        frame[i] = rotate_about(frame[i], curve.vertex_tangent(i), angle);
        frame[i] = unit(frame[i]);
    }
    return Ribbon(curve, std::move(frame));
}

Ribbon frenet_frame(const PolygonalCurve& curve) {
    const std::size_t n = curve.size();
    std::vector<Vec3> frame;
    frame.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 ein = curve.edge_vector((i + n - 1) % n);
        const Vec3 eout = curve.edge_vector(i);
        const Vec3 b = unit(ein.cross(eout));
        if (b.norm() == 0.0) {
            throw GeometricDegeneracyError(
                describe_index("collinear vertex triple at vertex", i));
        }
        const Vec3 t = curve.vertex_tangent(i);
        frame.push_back(unit(b.cross(t)));
    }
    return Ribbon(curve, std::move(frame));
}

}  // namespace writhe_lab
