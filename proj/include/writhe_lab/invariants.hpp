#pragma once

#include <cstdint>
#include <vector>

#include "writhe_lab/curves.hpp"

namespace writhe_lab {

/// One transversal crossing in a projected diagram. Edge indices are global
/// over the system (component-major); params locate the crossing strictly
/// inside each edge; over is the global index of the edge nearer the viewer.
struct Crossing {
    std::size_t edge_a = 0;
    std::size_t edge_b = 0;
    int sign = 0;          // +1 or -1
    double param_a = 0.0;  // in (0,1)
    double param_b = 0.0;  // in (0,1)
    std::size_t over = 0;
};

/// Diagram of a system projected along `direction`.
struct ProjectionReport {
    Vec3 direction;
    std::vector<Crossing> crossings;
    long directional_writhe = 0;
    bool degenerate = false;
};

/// Monte Carlo estimate of the writhe via directional-writhe averaging.
struct MonteCarloEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t perturbed_draws = 0;  // degenerate directions retried
};

/// Discrete total torsion. Vertices whose binormal is undefined (collinear
/// triples) and exact binormal flips contribute zero and are counted here.
struct TorsionResult {
    double value = 0.0;
    std::size_t degenerate_samples = 0;
};

/// Full twist/writhe/helicity decomposition of a flux tube. All normalized
/// quantities are in turns; helicities carry the flux-squared factor.
struct HelicityReport {
    double writhe = 0.0;
    double total_torsion = 0.0;
    double intrinsic_twist = 0.0;
    double twist = 0.0;
    double self_linking = 0.0;
    double flux = 0.0;
    double centerline_helicity = 0.0;
    double intrinsic_twist_helicity = 0.0;
    double helicity = 0.0;
};

// ---- kernel threading --------------------------------------------------------

/// Number of worker threads used by the O(n^2) pair sums and the Monte Carlo
/// sampler. Results are bit-identical for any thread count: partial results
/// are produced per canonical work unit and reduced in canonical order.
void set_kernel_threads(unsigned n);
unsigned kernel_threads();

// ---- edge-pair kernel ----------------------------------------------------------

/// Signed solid angle of the set of directions in which segments (p1->p2) and
/// (p3->p4) exhibit a crossing, counted per ordered pair as in the edge-sum
/// writhe formula; equals the Gauss double integral over the two segments,
/// in [-2pi, 2pi]. Exactly zero for segments sharing an endpoint and for
/// collinear pairs. Throws GeometricDegeneracyError on transversal
/// intersection.
double edge_pair_solid_angle(const Point3& p1, const Point3& p2,
                             const Point3& p3, const Point3& p4);

// ---- writhe and linking ---------------------------------------------------------

/// (1/4pi) sum over all ordered edge pairs of the solid-angle kernel.
double writhe(const PolygonalCurve& curve);

/// Same double sum over every edge of every component; equals
/// sum_k Wr(C_k) + 2 sum_{k<l} Lk(C_k, C_l).
double writhe_system(const CurveSystem& system);

/// (1/4pi) sum over edge pairs (a_i, b_j) of the solid-angle kernel.
double linking_number_gauss(const PolygonalCurve& a, const PolygonalCurve& b);

/// Nearest integer to linking_number_gauss.
long linking_number(const PolygonalCurve& a, const PolygonalCurve& b);

/// Half the signed inter-curve crossing count in the projection along nu.
/// Exact integer for any generic direction.
long linking_number_projection(const PolygonalCurve& a, const PolygonalCurve& b,
                               const Vec3& nu);

/// Projected diagram of the whole system along nu: all transversal crossings
/// (self and inter-component) with signs. Throws DegenerateDirectionError if
/// nu fails the genericity test.
ProjectionReport directional_writhe(const CurveSystem& system, const Vec3& nu);

/// Average of the directional writhe over `samples` seeded uniform random
/// directions. Degenerate draws are deterministically perturbed and counted.
MonteCarloEstimate writhe_monte_carlo(const PolygonalCurve& curve,
                                      std::uint64_t samples, std::uint64_t seed);

// ---- torsion, twist, self-linking ------------------------------------------------

/// (1/2pi) sum of signed dihedral angles between consecutive discrete
/// binormals, each in (-pi, pi].
TorsionResult total_torsion(const PolygonalCurve& curve);

/// Signed torsion angle (radians) at each edge; zero where flagged degenerate.
std::vector<double> torsion_angles(const PolygonalCurve& curve);

/// (1/2pi) times the total rotation of the framing relative to parallel
/// transport, accumulated edge by edge around the loop (the wrap increment
/// carries the closure). Throws AmbiguousTwistError on an exact half-turn
/// increment.
double twist(const Ribbon& ribbon);

/// N = Tw - T.
double intrinsic_twist(const Ribbon& ribbon);

/// SL = Wr + Tw.
double self_linking(const Ribbon& ribbon);

/// Linking number of the centerline with its framing pushoff at offset eps
/// (Calugareanu-White cross-check). Halves eps and retries if the pushoff
/// touches the centerline; throws GeometricDegeneracyError below eps_min.
double self_linking_pushoff(const Ribbon& ribbon, double eps, double eps_min = 1e-12);

// ---- helicity ---------------------------------------------------------------------

/// Populates every field of the report from the kernels above.
HelicityReport helicity_single(const FluxTube& tube);

/// H = Phi_a^2 SL(a) + Phi_b^2 SL(b) + 2 Phi_a Phi_b Lk(C_a, C_b).
double helicity_pair(const FluxTube& a, const FluxTube& b);

}  // namespace writhe_lab
