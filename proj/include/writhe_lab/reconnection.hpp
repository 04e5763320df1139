#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "writhe_lab/curves.hpp"
#include "writhe_lab/invariants.hpp"

namespace writhe_lab {

/// Designates the edge pair to be made coincident. For self-reconnection both
/// indices refer to the same curve and must name non-adjacent edges.
struct ReconnectionSite {
    std::size_t edge_a = 0;
    std::size_t edge_b = 0;
    double snap_tolerance = 1e-9;
};

struct AlignmentResult {
    PolygonalCurve b_translated;
    Vec3 translation;
};

/// Configuration at coincidence: A and the aligned B share the site edge with
/// opposite orientation (exactly, post-snap). When consecutive edge pairs
/// around the site are also coincident-reversed, the common segment is the
/// whole run; run_a / run_b list the coincident edge indices on each curve.
class ThetaCurve {
public:
    ThetaCurve(PolygonalCurve a, PolygonalCurve b, ReconnectionSite site);

    const PolygonalCurve& a() const { return a_; }
    const PolygonalCurve& b() const { return b_; }
    const ReconnectionSite& site() const { return site_; }
    const std::vector<std::size_t>& run_a() const { return run_a_; }
    const std::vector<std::size_t>& run_b() const { return run_b_; }

    /// Writhe with the common edges double-counted (the full pair sum).
    double writhe() const;

    /// For every edge e other than the site pair, the two kernel terms
    /// omega(a_n, e) and omega(b_m, e). They cancel in pairs exactly.
    std::vector<std::pair<double, double>> cancellation_terms() const;

private:
    PolygonalCurve a_;
    PolygonalCurve b_;
    ReconnectionSite site_;
    std::vector<std::size_t> run_a_;
    std::vector<std::size_t> run_b_;
};

/// Before/after conservation record of one surgery.
/// Sign conventions (both stored, never normalized to one):
///   delta_tw = (tw_before_a + tw_before_b) - tw_after   (before minus after)
///   delta_n  =  same orientation as delta_tw
///   delta_h  =  h_after - h_before                      (after minus before)
struct ReconnectionLedger {
    double wr_before = 0.0;
    double wr_after = 0.0;
    double lk_before = 0.0;
    double tw_before_a = 0.0;
    double tw_before_b = 0.0;
    double tw_after = 0.0;
    double t_before = 0.0;
    double t_after = 0.0;
    double n_before = 0.0;
    double n_after = 0.0;
    double delta_tw = 0.0;
    double delta_n = 0.0;
    double delta_h = 0.0;
    double h_before = 0.0;
    double h_after = 0.0;
    // Not part of the serialized schema: junction vertices merged away
    // because the splice produced zero-length edges.
    std::size_t merged_vertices = 0;
};

/// Translates B so the site edges become coincident with opposite orientation
/// (endpoint-to-endpoint, snapped exactly). The straight-line sweep of the
/// translation is checked, at 64 sampled steps, to keep B clear of A.
AlignmentResult align_for_reconnection(const PolygonalCurve& a, const PolygonalCurve& b,
                                       const ReconnectionSite& site);

/// Theta-curve intermediate of A and the aligned B.
ThetaCurve theta_intermediate(const PolygonalCurve& a, const PolygonalCurve& b_aligned,
                              const ReconnectionSite& site);

/// Anti-parallel reconnection: aligns, forms the theta intermediate, deletes
/// the interior of the common segment and splices the retained arcs into a
/// single closed polygon.
PolygonalCurve reconnect(const PolygonalCurve& a, const PolygonalCurve& b,
                         const ReconnectionSite& site);

/// Splits a single curve carrying a coincident anti-parallel edge pair into
/// two closed polygons. Does not deform; the caller must have juxtaposed the
/// edges already.
CurveSystem self_reconnect(const PolygonalCurve& curve, const ReconnectionSite& site);

/// Tube surgery: reconnects centerlines, splices the framings of the retained
/// arcs, and fills in the full conservation ledger. Fluxes must be equal.
std::pair<FluxTube, ReconnectionLedger> reconnect_tubes(const FluxTube& a,
                                                        const FluxTube& b,
                                                        const ReconnectionSite& site);

/// Self-surgery of a tube into two tubes, with the same ledger bookkeeping
/// (tw_before_b and lk_before are zero; the after-state helicity includes the
/// mutual linking term of the resulting pair).
std::pair<std::vector<FluxTube>, ReconnectionLedger> self_reconnect_tube(
    const FluxTube& tube, const ReconnectionSite& site);

}  // namespace writhe_lab
