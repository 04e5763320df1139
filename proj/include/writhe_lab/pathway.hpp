#pragma once

#include <string>
#include <vector>

#include "writhe_lab/curves.hpp"
#include "writhe_lab/reconnection.hpp"

namespace writhe_lab {

/// One stage of the minimal reconnection pathway.
struct PathwayStep {
    std::string name;             // configuration after this step
    bool self_mode = false;       // surgery type that produced it
    ReconnectionSite site;        // site used (indices into the pre-step state)
    CurveSystem state;            // configuration after the surgery
    ReconnectionLedger ledger;
};

struct PathwayRun {
    CurveSystem initial;          // the juxtaposed trefoil
    double initial_writhe = 0.0;
    std::vector<PathwayStep> steps;
};

/// The built-in juxtaposed trefoil: a single closed polygon carrying three
/// embedded anti-parallel junction segments. Deleting them in order yields a
/// Hopf-linked pair, then an unknot, then two unlinked loops.
PolygonalCurve pathway_master_curve();

/// Site of the first (self) surgery on the master curve.
ReconnectionSite pathway_first_site();

/// Runs the three reconnections, producing per-step ledgers.
PathwayRun run_pathway();

}  // namespace writhe_lab
