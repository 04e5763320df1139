#include "writhe_lab/pathway.hpp"

#include <algorithm>

namespace writhe_lab {

namespace {

// Waypoints of the doubled junction path joining the two lobes of the master
// curve. The path winds around the clasp strand so the joined curve is a
// trefoil rather than an unknot.
const Point3 kX{1.0, 0.0, 0.0};
const Point3 kW1{1.55, 1.0, 0.4};
const Point3 kW2{1.0, 1.6, 0.45};
const Point3 kW3{0.5, 1.0, 0.55};
const Point3 kY{1.0, 1.0, 1.0};

std::size_t find_edge(const PolygonalCurve& c, const Point3& from, const Point3& to) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.edge_start(i) == from && c.edge_end(i) == to) return i;
    }
    throw InvalidStateError("pathway fixture edge not found");
}

FluxTube default_tube(const PolygonalCurve& c) {
    const Vec3 v0 = orthogonal_unit(c.vertex_tangent(0));
    return FluxTube(parallel_transport_frame(c, v0), 1.0);
}

}  // namespace

PolygonalCurve pathway_master_curve() {
    // Lobe 1: two coplanar rectangles joined by a doubled rung (deleted at the
    // third surgery). Lobe 2: a small loop piercing the first rectangle once
    // (the Hopf clasp), with in-plane landing edges at the shared top edge so
    // the junction arcs are locally coplanar. The doubled path
    // X -> W1 -> W2 -> W3 -> Y joins the lobes and is deleted by the first
    // surgery.
    return PolygonalCurve({
        {0, 0, 0},
        kX,
        kW1,
        kW2,
        kW3,
        kY,
        {1, 1, -1},
        {0, 1.5, 0},
        {0, 2, 0},
        {2, 2, 0},
        {2, 1.5, 0},
        kY,
        kW3,
        kW2,
        kW1,
        kX,
        {2, 0, 0},
        {2, 1, 0},
        {4, 1, 0},
        {4, 0, 0},
        {6, 0, 0},
        {6, 2, 0},
        {4, 2, 0},
        {4, 1, 0},
        {2, 1, 0},
        {2, 2, 0},
        {0, 2, 0},
    });
}

ReconnectionSite pathway_first_site() {
    const PolygonalCurve master = pathway_master_curve();
    ReconnectionSite site;
    site.edge_a = find_edge(master, kW1, kW2);
    site.edge_b = find_edge(master, kW2, kW1);
    site.snap_tolerance = 1e-9;
    return site;
}

PathwayRun run_pathway() {
    PathwayRun run;
    const PolygonalCurve master = pathway_master_curve();
    run.initial = CurveSystem({master});
    run.initial_writhe = writhe(master);

    // Step 1: self-reconnection deleting the doubled junction path;
    // the trefoil splits into a Hopf-linked pair.
    const ReconnectionSite site1 = pathway_first_site();
    auto [pair_tubes, ledger1] = self_reconnect_tube(default_tube(master), site1);
    PathwayStep step1;
    step1.name = "hopf-pair";
    step1.self_mode = true;
    step1.site = site1;
    step1.state = CurveSystem(
        {pair_tubes[0].ribbon().curve(), pair_tubes[1].ribbon().curve()});
    step1.ledger = ledger1;
    run.steps.push_back(step1);

    // Step 2: pair reconnection along the coincident top edge; the Hopf pair
    // joins into a single unknotted loop. Order the components so the large
    // lobe is A.
    const PolygonalCurve& c0 = step1.state.component(0);
    const PolygonalCurve& c1 = step1.state.component(1);
    const bool zero_is_large = c0.size() > c1.size();
    const PolygonalCurve& big = zero_is_large ? c0 : c1;
    const PolygonalCurve& small = zero_is_large ? c1 : c0;
    ReconnectionSite site2;
    site2.edge_a = find_edge(big, {2, 2, 0}, {0, 2, 0});
    site2.edge_b = find_edge(small, {0, 2, 0}, {2, 2, 0});
    site2.snap_tolerance = 1e-9;
    auto [joined, ledger2] = reconnect_tubes(default_tube(big), default_tube(small), site2);
    PathwayStep step2;
    step2.name = "unknot";
    step2.self_mode = false;
    step2.site = site2;
    step2.state = CurveSystem({joined.ribbon().curve()});
    step2.ledger = ledger2;
    run.steps.push_back(step2);

    // Step 3: self-reconnection deleting the doubled rung; the unknot splits
    // into two unlinked loops.
    const PolygonalCurve& u = step2.state.component(0);
    ReconnectionSite site3;
    site3.edge_a = find_edge(u, {2, 1, 0}, {4, 1, 0});
    site3.edge_b = find_edge(u, {4, 1, 0}, {2, 1, 0});
    site3.snap_tolerance = 1e-9;
    auto [final_tubes, ledger3] = self_reconnect_tube(default_tube(u), site3);
    PathwayStep step3;
    step3.name = "unlinked-pair";
    step3.self_mode = true;
    step3.site = site3;
    step3.state = CurveSystem(
        {final_tubes[0].ribbon().curve(), final_tubes[1].ribbon().curve()});
    step3.ledger = ledger3;
    run.steps.push_back(step3);

    return run;
}

}  // namespace writhe_lab
