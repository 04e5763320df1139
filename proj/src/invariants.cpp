#include "writhe_lab/invariants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>
#include <tuple>

namespace writhe_lab {

namespace {

std::atomic<unsigned> g_kernel_threads{1};

/// Runs fn(row) for every row index. Rows are independent; each deposits its
/// result into caller-owned storage, so any schedule produces the same bits.
void for_each_row(std::size_t nrows, const std::function<void(std::size_t)>& fn) {
    const unsigned nt =
        std::min<unsigned>(g_kernel_threads.load(), static_cast<unsigned>(std::max<std::size_t>(nrows, 1)));
    if (nt <= 1) {
        for (std::size_t i = 0; i < nrows; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= nrows) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

bool lex_less(const Vec3& a, const Vec3& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
}

double clamp_unit(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

// Gauss double integral of the linking integrand over the two segments,
// by adaptive 2D Simpson. Used only for near-degenerate pairs where the
// closed form loses its sign, and as the coplanar limit (where the integrand
// vanishes identically).
struct PairIntegrand {
    Vec3 a0, da, b0, db;
    Vec3 dxd;  // da x db

    double operator()(double s, double t) const {
        const Vec3 r = (a0 + da * s) - (b0 + db * t);
        const double rn = r.norm();
        return dxd.dot(r) / (rn * rn * rn);
    }
};

double simpson_cell(const PairIntegrand& f, double s0, double s1, double t0, double t1,
                    double tol, int depth) {
    const double sm = 0.5 * (s0 + s1);
    const double tm = 0.5 * (t0 + t1);
    auto quad = [&](double u0, double u1, double v0, double v1) {
        const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
        const double w = (u1 - u0) * (v1 - v0) / 36.0;
        return w * (f(u0, v0) + f(u1, v0) + f(u0, v1) + f(u1, v1) +
                    4.0 * (f(um, v0) + f(um, v1) + f(u0, vm) + f(u1, vm)) + 16.0 * f(um, vm));
    };
    const double whole = quad(s0, s1, t0, t1);
    const double parts = quad(s0, sm, t0, tm) + quad(sm, s1, t0, tm) +
                         quad(s0, sm, tm, t1) + quad(sm, s1, tm, t1);
    if (depth <= 0 || std::fabs(parts - whole) <= tol) {
        return parts + (parts - whole) / 15.0;
    }
    return simpson_cell(f, s0, sm, t0, tm, tol * 0.25, depth - 1) +
           simpson_cell(f, sm, s1, t0, tm, tol * 0.25, depth - 1) +
           simpson_cell(f, s0, sm, tm, t1, tol * 0.25, depth - 1) +
           simpson_cell(f, sm, s1, tm, t1, tol * 0.25, depth - 1);
}

double pair_quadrature(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    PairIntegrand f{a0, a1 - a0, b0, b1 - b0, (a1 - a0).cross(b1 - b0)};
    return simpson_cell(f, 0.0, 1.0, 0.0, 1.0, 1e-12, 22);
}

// Closed-form kernel on canonically ordered segments. p/q endpoints are
// lexicographically sorted within each segment and the two segments are
// lexicographically ordered, which makes the orientation/exchange symmetries
// hold bit-exactly.
double solid_angle_canonical(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    const Vec3 da = a1 - a0;
    const Vec3 db = b1 - b0;
    const double la = da.norm();
    const double lb = db.norm();

    const Vec3 dxd = da.cross(db);
    const double scale = std::max({la, lb, (b0 - a0).norm()});
    if (dxd.norm() <= 1e-13 * la * lb) {
        // Parallel directions: projections preserve parallelism, so no
        // direction shows a transversal crossing. Covers collinear overlaps.
        return 0.0;
    }

    // Coplanarity / proximity measure.
    const double tp = dxd.dot(b0 - a0);
    if (std::fabs(tp) <= 1e-13 * la * lb * scale) {
        const double dist = segment_segment_distance(a0, a1, b0, b1);
        if (dist <= 1e-12 * scale) {
            throw GeometricDegeneracyError("segments intersect transversally");
        }
        return pair_quadrature(a0, a1, b0, b1);
    }

    const Vec3 r00 = a0 - b0;
    const Vec3 r01 = a0 - b1;
    const Vec3 r10 = a1 - b0;
    const Vec3 r11 = a1 - b1;
    const Vec3 c1 = r00.cross(r01);
    const Vec3 c2 = r01.cross(r11);
    const Vec3 c3 = r11.cross(r10);
    const Vec3 c4 = r10.cross(r00);
    const double n1 = c1.norm(), n2 = c2.norm(), n3 = c3.norm(), n4 = c4.norm();
    if (n1 == 0.0 || n2 == 0.0 || n3 == 0.0 || n4 == 0.0) {
        return pair_quadrature(a0, a1, b0, b1);
    }
    const Vec3 u1 = c1 / n1, u2 = c2 / n2, u3 = c3 / n3, u4 = c4 / n4;
    const double omega = std::asin(clamp_unit(u1.dot(u2))) + std::asin(clamp_unit(u2.dot(u3))) +
                         std::asin(clamp_unit(u3.dot(u4))) + std::asin(clamp_unit(u4.dot(u1)));
    return dxd.dot(r00) > 0.0 ? omega : -omega;
}

struct FlatEdge {
    Vec3 a, b;
    std::size_t component;
    std::size_t local;
};

std::vector<FlatEdge> flatten(const CurveSystem& system) {
    std::vector<FlatEdge> edges;
    edges.reserve(system.total_edges());
    for (std::size_t c = 0; c < system.size(); ++c) {
        const auto& curve = system.component(c);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            edges.push_back({curve.edge_start(i), curve.edge_end(i), c, i});
        }
    }
    return edges;
}

bool adjacent_in_component(const FlatEdge& e, const FlatEdge& f, std::size_t comp_size) {
    if (e.component != f.component) return false;
    const std::size_t d = (e.local + comp_size - f.local) % comp_size;
    return d == 1 || d == comp_size - 1;
}

/// (1/2pi) sum over unordered distinct edge pairs, rows reduced in canonical
/// (lexicographic) order with compensated summation.
double half_sum_over_pairs(const std::vector<FlatEdge>& edges,
                           const std::vector<std::size_t>& comp_sizes) {
    const std::size_t m = edges.size();
    if (m < 2) return 0.0;
    std::vector<double> row_sums(m - 1, 0.0);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for_each_row(m - 1, [&](std::size_t i) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            KahanSum row;
            for (std::size_t j = i + 1; j < m; ++j) {
                if (adjacent_in_component(edges[i], edges[j], comp_sizes[edges[i].component])) {
                    continue;
                }
                row.add(edge_pair_solid_angle(edges[i].a, edges[i].b, edges[j].a, edges[j].b));
            }
            row_sums[i] = row.value();
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
    });
    if (failed.load()) std::rethrow_exception(error);
    KahanSum total;
    for (double r : row_sums) total.add(r);
    return total.value() / kTwoPi;
}

}  // namespace

void set_kernel_threads(unsigned n) { g_kernel_threads.store(n == 0 ? 1 : n); }
unsigned kernel_threads() { return g_kernel_threads.load(); }

double edge_pair_solid_angle(const Point3& p1, const Point3& p2,
                             const Point3& p3, const Point3& p4) {
    // Identical edges and edges meeting in a common vertex contribute exactly
    // zero; short-circuit before any arithmetic.
    if (p1 == p3 || p1 == p4 || p2 == p3 || p2 == p4) return 0.0;

    // Canonical form: sort endpoints within each segment, then sort the two
    // segments; track the orientation sign. The kernel value is then computed
    // on identical inputs regardless of how the caller oriented the edges,
    // which makes antisymmetry exact at the bit level.
    Vec3 a0 = p1, a1 = p2, b0 = p3, b1 = p4;
    double sign = 1.0;
    if (lex_less(a1, a0)) {
        std::swap(a0, a1);
        sign = -sign;
    }
    if (lex_less(b1, b0)) {
        std::swap(b0, b1);
        sign = -sign;
    }
    if (lex_less(b0, a0) || (b0 == a0 && lex_less(b1, a1))) {
        std::swap(a0, b0);
        std::swap(a1, b1);
    }
    return sign * solid_angle_canonical(a0, a1, b0, b1);
}

double writhe(const PolygonalCurve& curve) {
    return writhe_system(CurveSystem({curve}));
}

double writhe_system(const CurveSystem& system) {
    std::vector<FlatEdge> edges = flatten(system);
    std::vector<std::size_t> comp_sizes(system.size());
    for (std::size_t c = 0; c < system.size(); ++c) comp_sizes[c] = system.component(c).size();
    try {
        return half_sum_over_pairs(edges, comp_sizes);
    } catch (const GeometricDegeneracyError& e) {
        throw GeometricDegeneracyError(std::string("writhe kernel: ") + e.what());
    }
}

double linking_number_gauss(const PolygonalCurve& a, const PolygonalCurve& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<double> row_sums(n, 0.0);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for_each_row(n, [&](std::size_t i) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            KahanSum row;
            for (std::size_t j = 0; j < m; ++j) {
                row.add(edge_pair_solid_angle(a.edge_start(i), a.edge_end(i),
                                              b.edge_start(j), b.edge_end(j)));
            }
            row_sums[i] = row.value();
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
    });
    if (failed.load()) {
        try {
            std::rethrow_exception(error);
        } catch (const GeometricDegeneracyError&) {
            std::ostringstream os;
            os << "curves are not disjoint (minimum distance "
               << CurveSystem::component_clearance(a, b) << ")";
            throw DisjointnessError(os.str());
        }
    }
    KahanSum total;
    for (double r : row_sums) total.add(r);
    return total.value() / (2.0 * kTwoPi);
}

long linking_number(const PolygonalCurve& a, const PolygonalCurve& b) {
    return std::lround(linking_number_gauss(a, b));
}

// ---- torsion, twist, self-linking -------------------------------------------

namespace {

struct TorsionSamples {
    std::vector<double> angles;  // one per edge, zero where degenerate
    std::size_t degenerate = 0;
};

TorsionSamples torsion_samples(const PolygonalCurve& curve) {
    const std::size_t n = curve.size();
    std::vector<Vec3> binormal(n);
    std::vector<bool> defined(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 ein = curve.edge_vector((i + n - 1) % n);
        const Vec3 eout = curve.edge_vector(i);
        const Vec3 b = ein.cross(eout);
        const double bn = b.norm();
        if (bn > 1e-12 * ein.norm() * eout.norm()) {
            binormal[i] = b / bn;
            defined[i] = true;
        }
    }
    TorsionSamples out;
    out.angles.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        if (!defined[i] || !defined[j]) {
            ++out.degenerate;  // collinear triple: contributes 0, flagged
            continue;
        }
        const Vec3 e = unit(curve.edge_vector(i));
        const double s = triple(binormal[i], binormal[j], e);
        const double c = binormal[i].dot(binormal[j]);
        if (c < 0.0 && std::fabs(s) < 1e-9) {
            // Binormal flip (inflection); the osculating plane reverses without
            // rotating about the edge. Planar polygons land here exactly.
            ++out.degenerate;
            continue;
        }
        out.angles[i] = std::atan2(s, c);
    }
    return out;
}

}  // namespace

std::vector<double> torsion_angles(const PolygonalCurve& curve) {
    return torsion_samples(curve).angles;
}

TorsionResult total_torsion(const PolygonalCurve& curve) {
    const TorsionSamples samples = torsion_samples(curve);
    KahanSum sum;
    for (double a : samples.angles) sum.add(a);
    return {sum.value() / kTwoPi, samples.degenerate};
}

double twist(const Ribbon& ribbon) {
    const PolygonalCurve& curve = ribbon.curve();
    const std::size_t n = curve.size();
    KahanSum sum;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const Vec3 ti = curve.vertex_tangent(i);
        const Vec3 tj = curve.vertex_tangent(j);
        Vec3 v = transport(ribbon.framing_vector(i), ti, tj);
        v = unit(v - tj * v.dot(tj));
        const Vec3& w = ribbon.framing_vector(j);
        const double s = triple(v, w, tj);
        const double c = v.dot(w);
        if (s == 0.0 && c < 0.0) {
            std::ostringstream os;
            os << "framing increment of exactly a half turn across edge " << i
               << "; refine the framing sampling";
            throw AmbiguousTwistError(os.str());
        }
        sum.add(std::atan2(s, c));
    }
    return sum.value() / kTwoPi;
}

double intrinsic_twist(const Ribbon& ribbon) {
    return twist(ribbon) - total_torsion(ribbon.curve()).value;
}

double self_linking(const Ribbon& ribbon) {
    return writhe(ribbon.curve()) + twist(ribbon);
}

double self_linking_pushoff(const Ribbon& ribbon, double eps, double eps_min) {
    double e = eps;
    while (e >= eps_min) {
        try {
            return linking_number_gauss(ribbon.curve(), ribbon.pushoff(e));
        } catch (const Error&) {
            e *= 0.5;  // pushoff touched the centerline; tighten and retry
        }
    }
    throw GeometricDegeneracyError(
        "pushoff intersects the centerline down to the minimum offset");
}

// ---- helicity ------------------------------------------------------------------

HelicityReport helicity_single(const FluxTube& tube) {
    HelicityReport r;
    r.flux = tube.flux();
    r.writhe = writhe(tube.ribbon().curve());
    r.total_torsion = total_torsion(tube.ribbon().curve()).value;
    r.twist = twist(tube.ribbon());
    r.intrinsic_twist = r.twist - r.total_torsion;
    r.self_linking = r.writhe + r.twist;
    const double f2 = r.flux * r.flux;
    r.centerline_helicity = f2 * (r.writhe + r.total_torsion);
    r.intrinsic_twist_helicity = f2 * r.intrinsic_twist;
    r.helicity = f2 * (r.writhe + r.twist);
    return r;
}

double helicity_pair(const FluxTube& a, const FluxTube& b) {
    const double sla = self_linking(a.ribbon());
    const double slb = self_linking(b.ribbon());
    const double lk = linking_number_gauss(a.ribbon().curve(), b.ribbon().curve());
    return a.flux() * a.flux() * sla + b.flux() * b.flux() * slb +
           2.0 * a.flux() * b.flux() * lk;
}

}  // namespace writhe_lab
