#include "writhe_lab/reconnection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace writhe_lab {

namespace {

constexpr double kAngularTol = 1e-6;   // anti-parallel direction tolerance (rad)
constexpr int kSweepSteps = 64;

struct SiteEdges {
    Vec3 a0, a1, b0, b1;
    double len_a, len_b;
};

SiteEdges site_edges(const PolygonalCurve& a, const PolygonalCurve& b,
                     const ReconnectionSite& site) {
    if (site.edge_a >= a.size() || site.edge_b >= b.size()) {
        throw InvalidParameterError("reconnection site edge index out of range");
    }
    SiteEdges e{a.edge_start(site.edge_a), a.edge_end(site.edge_a),
                b.edge_start(site.edge_b), b.edge_end(site.edge_b), 0.0, 0.0};
    e.len_a = (e.a1 - e.a0).norm();
    e.len_b = (e.b1 - e.b0).norm();
    return e;
}

void check_anti_parallel(const SiteEdges& e, double snap_tolerance) {
    const double len_tol = std::max(snap_tolerance, 0.01 * std::min(e.len_a, e.len_b));
    if (std::fabs(e.len_a - e.len_b) > len_tol) {
        std::ostringstream os;
        os << "site edges differ in length by " << std::fabs(e.len_a - e.len_b)
           << " (tolerance " << len_tol << ")";
        throw NotAntiParallelError(os.str());
    }
    const Vec3 da = (e.a1 - e.a0) / e.len_a;
    const Vec3 db = (e.b1 - e.b0) / e.len_b;
    const double c = da.dot(-db);
    const double angle = std::acos(std::clamp(c, -1.0, 1.0));
    if (angle > kAngularTol) {
        std::ostringstream os;
        os << "site edges not anti-parallel: angle " << angle << " rad";
        throw NotAntiParallelError(os.str());
    }
}

/// Minimum distance between A and the translated B over the sweep, skipping
/// the edge pairs incident to the site (they are meant to meet at the end).
void check_sweep(const PolygonalCurve& a, const PolygonalCurve& b,
                 const ReconnectionSite& site, const Vec3& w) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const double diam = std::max(a.diameter(), b.diameter()) + w.norm();
    const double threshold = 1e-9 * diam;
    auto near_site_a = [&](std::size_t i) {
        return i == site.edge_a || i == (site.edge_a + 1) % n ||
               i == (site.edge_a + n - 1) % n;
    };
    auto near_site_b = [&](std::size_t j) {
        return j == site.edge_b || j == (site.edge_b + 1) % m ||
               j == (site.edge_b + m - 1) % m;
    };
    for (int step = 1; step < kSweepSteps; ++step) {
        const Vec3 offset = w * (static_cast<double>(step) / kSweepSteps);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (near_site_a(i) && near_site_b(j)) continue;
                const double d = segment_segment_distance(
                    a.edge_start(i), a.edge_end(i), b.edge_start(j) + offset,
                    b.edge_end(j) + offset);
                if (d < threshold) {
                    std::ostringstream os;
                    os << "translation sweep collides at step " << step << "/"
                       << kSweepSteps << ": edge " << i << " of A against edge " << j
                       << " of B (distance " << d << ")";
                    throw PathObstructionError(os.str());
                }
            }
        }
    }
}

PolygonalCurve snap_site(const PolygonalCurve& b_translated, const ReconnectionSite& site,
                         const Vec3& a0, const Vec3& a1) {
    std::vector<Point3> pts = b_translated.vertices();
    const std::size_t m = pts.size();
    pts[site.edge_b] = a1;
    pts[(site.edge_b + 1) % m] = a0;
    return PolygonalCurve(std::move(pts));
}

/// Grows the coincident anti-parallel run around the (already coincident)
/// site pair: step k of "left" growth pairs edge p-k of A with q+k of B,
/// step k of "right" growth pairs edge p+k of A with q-k of B. Growth stops
/// at the first non-coincident pair or at the given caps.
void grow_run(const PolygonalCurve& a, const PolygonalCurve& b, std::size_t p,
              std::size_t q, std::size_t max_left, std::size_t max_right,
              std::size_t* left, std::size_t* right) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    *left = 0;
    *right = 0;
    for (std::size_t k = 1; k <= max_left; ++k) {
        const std::size_t ia = (p + n - k) % n;
        const std::size_t jb = (q + k) % m;
        if (a.edge_start(ia) == b.edge_end(jb) && a.edge_end(ia) == b.edge_start(jb)) {
            *left = k;
        } else {
            break;
        }
    }
    for (std::size_t k = 1; k <= max_right; ++k) {
        const std::size_t ia = (p + k) % n;
        const std::size_t jb = (q + m - k) % m;
        if (a.edge_start(ia) == b.edge_end(jb) && a.edge_end(ia) == b.edge_start(jb)) {
            *right = k;
        } else {
            break;
        }
    }
}

void grow_run_pair(const PolygonalCurve& a, const PolygonalCurve& b, std::size_t p,
                   std::size_t q, std::size_t* left, std::size_t* right) {
    // The splice needs at least 3 retained vertices on each curve.
    const std::size_t cap = std::min(a.size(), b.size()) - 3;
    grow_run(a, b, p, q, cap, cap, left, right);
    while (*left + *right + 1 + 2 > std::min(a.size(), b.size())) {
        if (*left > *right) --*left; else --*right;
    }
}

void grow_run_self(const PolygonalCurve& c, std::size_t i, std::size_t j,
                   std::size_t* left, std::size_t* right) {
    const std::size_t n = c.size();
    const std::size_t gap = (j + n - i) % n;  // forward distance i -> j
    // Loop 1 keeps gap - 2*right - 1 vertices, loop 2 keeps n - gap - 2*left - 1.
    const std::size_t max_right = gap >= 6 ? (gap - 4) / 2 : 0;
    const std::size_t max_left = (n - gap) >= 6 ? (n - gap - 4) / 2 : 0;
    grow_run(c, c, i, j, max_left, max_right, left, right);
}

struct SpliceResult {
    std::vector<Point3> vertices;
    // provenance: (0, i) = vertex i of A, (1, j) = vertex j of B
    std::vector<std::pair<int, std::size_t>> origin;
    std::size_t merged = 0;
};

/// Deletes the common run (edges p-left..p+right of A, q-right..q+left of B)
/// and splices the retained arcs into one vertex loop. Junction vertices are
/// retained from A; B's coincident copies are dropped. Consecutive duplicate
/// vertices produced by the splice are merged and counted.
SpliceResult splice(const PolygonalCurve& a, const PolygonalCurve& b, std::size_t p,
                    std::size_t q, std::size_t left, std::size_t right) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t run = left + right + 1;
    if (run + 2 > n || run + 2 > m) {
        throw DegenerateEdgeError("coincident run leaves too little of a curve to splice");
    }
    SpliceResult out;
    out.vertices.reserve(n + m - 2 * run);
    // A path: vertices p+right+1 .. p-left (inclusive), forward: n-run+1 vertices.
    for (std::size_t k = 0; k <= n - run; ++k) {
        const std::size_t i = (p + right + 1 + k) % n;
        out.vertices.push_back(a.vertex(i));
        out.origin.emplace_back(0, i);
    }
    // B path interior: vertices q+left+2 .. q-right-1 (inclusive): m-run-1
    // vertices (the B path endpoints coincide with the A path junctions).
    for (std::size_t k = 0; k + 1 < m - run; ++k) {
        const std::size_t j = (q + left + 2 + k) % m;
        out.vertices.push_back(b.vertex(j));
        out.origin.emplace_back(1, j);
    }
    // merge zero-length junction edges
    for (std::size_t i = 0; i < out.vertices.size();) {
        const std::size_t j = (i + 1) % out.vertices.size();
        if (out.vertices.size() > 3 && out.vertices[i] == out.vertices[j]) {
            out.vertices.erase(out.vertices.begin() + static_cast<long>(j));
            out.origin.erase(out.origin.begin() + static_cast<long>(j));
            ++out.merged;
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace

AlignmentResult align_for_reconnection(const PolygonalCurve& a, const PolygonalCurve& b,
                                       const ReconnectionSite& site) {
    const SiteEdges e = site_edges(a, b, site);
    check_anti_parallel(e, site.snap_tolerance);
    const Vec3 w = e.a1 - e.b0;
    if (w.norm() > 0.0) {
        check_sweep(a, b, site, w);
    }
    PolygonalCurve moved = translate(b, w);
    return {snap_site(moved, site, e.a0, e.a1), w};
}

ThetaCurve::ThetaCurve(PolygonalCurve a, PolygonalCurve b, ReconnectionSite site)
    : a_(std::move(a)), b_(std::move(b)), site_(site) {
    const SiteEdges e = site_edges(a_, b_, site_);
    if (!(e.a0 == e.b1 && e.a1 == e.b0)) {
        throw InvalidStateError(
            "theta intermediate requires exactly coincident, oppositely oriented site edges");
    }
    std::size_t left = 0, right = 0;
    grow_run_pair(a_, b_, site_.edge_a, site_.edge_b, &left, &right);
    const std::size_t n = a_.size();
    const std::size_t m = b_.size();
    for (std::size_t k = 0; k <= left + right; ++k) {
        run_a_.push_back((site_.edge_a + n - left + k) % n);
        run_b_.push_back((site_.edge_b + m - right + k) % m);
    }
}

double ThetaCurve::writhe() const {
    return writhe_system(CurveSystem({a_, b_}));
}

std::vector<std::pair<double, double>> ThetaCurve::cancellation_terms() const {
    const Vec3 an0 = a_.edge_start(site_.edge_a);
    const Vec3 an1 = a_.edge_end(site_.edge_a);
    const Vec3 bm0 = b_.edge_start(site_.edge_b);
    const Vec3 bm1 = b_.edge_end(site_.edge_b);
    std::vector<std::pair<double, double>> terms;
    auto collect = [&](const PolygonalCurve& c, std::size_t skip_site) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i == skip_site) continue;
            terms.emplace_back(
                edge_pair_solid_angle(an0, an1, c.edge_start(i), c.edge_end(i)),
                edge_pair_solid_angle(bm0, bm1, c.edge_start(i), c.edge_end(i)));
        }
    };
    collect(a_, site_.edge_a);
    collect(b_, site_.edge_b);
    return terms;
}

ThetaCurve theta_intermediate(const PolygonalCurve& a, const PolygonalCurve& b_aligned,
                              const ReconnectionSite& site) {
    return ThetaCurve(a, b_aligned, site);
}

PolygonalCurve reconnect(const PolygonalCurve& a, const PolygonalCurve& b,
                         const ReconnectionSite& site) {
    const AlignmentResult aligned = align_for_reconnection(a, b, site);
    theta_intermediate(a, aligned.b_translated, site);  // validates coincidence
    std::size_t l = 0, r = 0;
    grow_run_pair(a, aligned.b_translated, site.edge_a, site.edge_b, &l, &r);
    SpliceResult s = splice(a, aligned.b_translated, site.edge_a, site.edge_b, l, r);
    try {
        return PolygonalCurve(std::move(s.vertices));
    } catch (const DegenerateEdgeError& e) {
        throw DegenerateEdgeError(std::string("splice produced a degenerate curve: ") +
                                  e.what());
    }
}

CurveSystem self_reconnect(const PolygonalCurve& curve, const ReconnectionSite& site) {
    const std::size_t n = curve.size();
    if (site.edge_a >= n || site.edge_b >= n || site.edge_a == site.edge_b) {
        throw InvalidParameterError("self-reconnection needs two distinct edges");
    }
    const std::size_t gap = (site.edge_b + n - site.edge_a) % n;
    if (gap == 1 || gap == n - 1) {
        throw InvalidParameterError("self-reconnection edges must be non-adjacent");
    }
    const std::size_t i = site.edge_a;
    const std::size_t j = site.edge_b;
    const Vec3 i0 = curve.edge_start(i), i1 = curve.edge_end(i);
    const Vec3 j0 = curve.edge_start(j), j1 = curve.edge_end(j);
    const double tol = site.snap_tolerance;
    if (!((i0 - j1).norm() <= tol && (i1 - j0).norm() <= tol)) {
        std::ostringstream os;
        os << "site edges are not juxtaposed: endpoint offsets "
           << (i0 - j1).norm() << ", " << (i1 - j0).norm() << " exceed tolerance " << tol;
        throw NotJuxtaposedError(os.str());
    }

    std::size_t left = 0, right = 0;
    grow_run_self(curve, i, j, &left, &right);

    // Loop 1: vertices strictly between the runs, walking i side -> j side.
    // Loop 2: the complementary arc.
    auto collect = [&](std::size_t first, std::size_t last) {
        std::vector<Point3> pts;
        std::size_t k = first;
        for (;;) {
            pts.push_back(curve.vertex(k));
            if (k == last) break;
            k = (k + 1) % n;
        }
        return pts;
    };
    // Arc from end of run (i+right edge) to start of run's partner on j side.
    const std::size_t a_begin = (i + right + 1) % n;
    const std::size_t a_end = (j + n - right) % n;     // == coincident with a_begin
    const std::size_t b_begin = (j + left + 1) % n;
    const std::size_t b_end = (i + n - left) % n;      // == coincident with b_begin
    std::vector<Point3> loop1 = collect(a_begin, (a_end + n - 1) % n);
    std::vector<Point3> loop2 = collect(b_begin, (b_end + n - 1) % n);
    if (loop1.size() < 3 || loop2.size() < 3) {
        throw DegenerateSplitError("self-reconnection would produce a component with fewer than 3 vertices");
    }
    return CurveSystem({PolygonalCurve(std::move(loop1)), PolygonalCurve(std::move(loop2))});
}

namespace {

Vec3 reorthogonalized(const Vec3& v, const Vec3& tangent) {
    const Vec3 w = v - tangent * v.dot(tangent);
    const double n = w.norm();
    if (n < 1e-9) {
        throw AmbiguousTwistError(
            "framing splice ambiguous at junction: framing parallel to new tangent");
    }
    return w / n;
}

Ribbon splice_ribbon(const SpliceResult& s, const Ribbon& ra, const Ribbon& rb) {
    PolygonalCurve curve(s.vertices);
    std::vector<Vec3> framing;
    framing.reserve(s.vertices.size());
    for (std::size_t k = 0; k < s.vertices.size(); ++k) {
        const auto [which, idx] = s.origin[k];
        const Vec3& v = which == 0 ? ra.framing_vector(idx) : rb.framing_vector(idx);
        framing.push_back(reorthogonalized(v, curve.vertex_tangent(k)));
    }
    return Ribbon(std::move(curve), std::move(framing));
}

ReconnectionLedger make_ledger(double wr_before, double lk_before, double tw_a,
                               double tw_b, double t_before, double flux,
                               double wr_after, double tw_after, double t_after,
                               std::size_t merged) {
    ReconnectionLedger led;
    led.wr_before = wr_before;
    led.wr_after = wr_after;
    led.lk_before = lk_before;
    led.tw_before_a = tw_a;
    led.tw_before_b = tw_b;
    led.tw_after = tw_after;
    led.t_before = t_before;
    led.t_after = t_after;
    led.n_before = (tw_a + tw_b) - t_before;
    led.n_after = tw_after - t_after;
    led.delta_tw = (tw_a + tw_b) - tw_after;      // Eq.-(10) orientation
    led.delta_n = led.n_before - led.n_after;     // same orientation as delta_tw
    const double f2 = flux * flux;
    led.h_before = f2 * (wr_before + tw_a + tw_b);
    led.h_after = f2 * (wr_after + tw_after);
    led.delta_h = led.h_after - led.h_before;     // Eq.-(13) orientation
    led.merged_vertices = merged;
    return led;
}

}  // namespace

std::pair<FluxTube, ReconnectionLedger> reconnect_tubes(const FluxTube& a,
                                                        const FluxTube& b,
                                                        const ReconnectionSite& site) {
    if (std::fabs(a.flux() - b.flux()) > 1e-12 * std::max(a.flux(), b.flux())) {
        throw UnequalFluxError("tube reconnection requires equal fluxes");
    }
    const PolygonalCurve& ca = a.ribbon().curve();
    const AlignmentResult aligned = align_for_reconnection(ca, b.ribbon().curve(), site);

    // Carry B's framing onto the translated/snapped copy; the two snapped
    // vertices get re-orthogonalized framings.
    std::vector<Vec3> framing_b;
    framing_b.reserve(aligned.b_translated.size());
    for (std::size_t k = 0; k < aligned.b_translated.size(); ++k) {
        framing_b.push_back(reorthogonalized(b.ribbon().framing_vector(k),
                                             aligned.b_translated.vertex_tangent(k)));
    }
    const Ribbon rb(aligned.b_translated, framing_b);

    const ThetaCurve theta = theta_intermediate(ca, aligned.b_translated, site);
    std::size_t l = 0, r = 0;
    grow_run_pair(ca, aligned.b_translated, site.edge_a, site.edge_b, &l, &r);

    const double wr_before = theta.writhe();
    const double lk_before = linking_number_gauss(ca, aligned.b_translated);
    const double tw_a = twist(a.ribbon());
    const double tw_b = twist(rb);
    const double t_before =
        total_torsion(ca).value + total_torsion(aligned.b_translated).value;

    SpliceResult s = splice(ca, aligned.b_translated, site.edge_a, site.edge_b, l, r);
    Ribbon spliced = splice_ribbon(s, a.ribbon(), rb);

    const double wr_after = writhe(spliced.curve());
    const double tw_after = twist(spliced);
    const double t_after = total_torsion(spliced.curve()).value;

    ReconnectionLedger led = make_ledger(wr_before, lk_before, tw_a, tw_b, t_before,
                                         a.flux(), wr_after, tw_after, t_after, s.merged);
    return {FluxTube(std::move(spliced), a.flux()), led};
}

std::pair<std::vector<FluxTube>, ReconnectionLedger> self_reconnect_tube(
    const FluxTube& tube, const ReconnectionSite& site) {
    const PolygonalCurve& c = tube.ribbon().curve();
    const CurveSystem parts = self_reconnect(c, site);
    const std::size_t n = c.size();

    // Rebuild framings on the two loops from the retained vertices.
    std::size_t left = 0, right = 0;
    grow_run_self(c, site.edge_a, site.edge_b, &left, &right);
    auto framing_for = [&](const PolygonalCurve& loop, std::size_t first) {
        std::vector<Vec3> framing;
        framing.reserve(loop.size());
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const std::size_t src = (first + k) % n;
            framing.push_back(
                reorthogonalized(tube.ribbon().framing_vector(src), loop.vertex_tangent(k)));
        }
        return framing;
    };
    const std::size_t a_begin = (site.edge_a + right + 1) % n;
    const std::size_t b_begin = (site.edge_b + left + 1) % n;
    Ribbon r1(parts.component(0), framing_for(parts.component(0), a_begin));
    Ribbon r2(parts.component(1), framing_for(parts.component(1), b_begin));

    const double wr_before = writhe(c);
    const double tw_before = twist(tube.ribbon());
    const double t_before = total_torsion(c).value;
    const double wr_after = writhe_system(parts);
    const double tw_after = twist(r1) + twist(r2);
    const double t_after =
        total_torsion(parts.component(0)).value + total_torsion(parts.component(1)).value;

    ReconnectionLedger led = make_ledger(wr_before, 0.0, tw_before, 0.0, t_before,
                                         tube.flux(), wr_after, tw_after, t_after, 0);
    std::vector<FluxTube> tubes;
    tubes.emplace_back(std::move(r1), tube.flux());
    tubes.emplace_back(std::move(r2), tube.flux());
    return {std::move(tubes), led};
}

}  // namespace writhe_lab
