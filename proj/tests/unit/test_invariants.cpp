#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "writhe_lab/curves.hpp"
#include "writhe_lab/invariants.hpp"

using namespace writhe_lab;

TEST_CASE("edge pair kernel matches the quadrature oracle on skew pairs") {
    struct Pair {
        Point3 a0, a1, b0, b1;
    };
    const Pair pairs[] = {
        {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}, {0, 1, 1}},
        {{0, 0, 0}, {2, 1, 0}, {1, -1, 1}, {-1, 2, 2}},
        {{-1, 0, 0.5}, {1, 0.2, 0.4}, {0, -1, -0.3}, {0.1, 1, -0.6}},
        {{3, 1, 2}, {4, 1, 2.5}, {3.2, 0.4, 3}, {3.8, 1.6, 2.8}},
    };
    for (const auto& p : pairs) {
        const double oracle =
            oracles::segment_pair_gauss_integral(p.a0, p.a1, p.b0, p.b1);
        const double value = edge_pair_solid_angle(p.a0, p.a1, p.b0, p.b1);
        CHECK(value == doctest::Approx(oracle).epsilon(0).scale(1).epsilon(1e-9));
        CHECK(std::fabs(value - oracle) < 1e-9);
    }
}

TEST_CASE("edge pair kernel on segments sharing a vertex is exactly zero") {
    CHECK(edge_pair_solid_angle({0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 1, 1}) == 0.0);
    CHECK(edge_pair_solid_angle({0, 0, 0}, {1, 0, 0}, {0, 2, 1}, {0, 0, 0}) == 0.0);
    // identical edge traversed in reverse
    CHECK(edge_pair_solid_angle({0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 0, 0}) == 0.0);
}

TEST_CASE("edge pair kernel on coplanar disjoint segments is zero") {
    CHECK(edge_pair_solid_angle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}) == 0.0);
    CHECK(edge_pair_solid_angle({0, 0, 0}, {1, 1, 0}, {2, 0, 0}, {3, 5, 0}) ==
          doctest::Approx(0.0).epsilon(1e-15));
    // collinear overlapping pair (the theta-curve contact)
    CHECK(edge_pair_solid_angle({0, 0, 0}, {3, 0, 0}, {2.5, 0, 0}, {0.5, 0, 0}) == 0.0);
}

TEST_CASE("edge pair kernel antisymmetry is exact at the bit level") {
    const Point3 a0{0.1, 0.2, 0.3}, a1{1.7, -0.4, 0.9};
    const Point3 b0{-0.3, 1.1, -0.8}, b1{0.6, 2.2, 1.4};
    const double w = edge_pair_solid_angle(a0, a1, b0, b1);
    CHECK(edge_pair_solid_angle(a1, a0, b0, b1) == -w);
    CHECK(edge_pair_solid_angle(a0, a1, b1, b0) == -w);
    CHECK(edge_pair_solid_angle(a1, a0, b1, b0) == w);
    CHECK(edge_pair_solid_angle(b0, b1, a0, a1) == w);
}

TEST_CASE("edge pair kernel rejects transversally intersecting segments") {
    CHECK_THROWS_AS(edge_pair_solid_angle({0, 0, 0}, {2, 2, 0}, {2, 0, 0}, {0, 2, 0}),
                    GeometricDegeneracyError);
}

TEST_CASE("edge pair kernel near-degenerate fallback stays accurate") {
    // nearly coplanar disjoint pair: triple product small enough for the
    // quadrature fallback, well separated in the plane
    const Point3 a0{0, 0, 0}, a1{1, 0, 0};
    const Point3 b0{0.3, 0.2, 1e-14}, b1{0.9, 0.7, 2e-14};
    const double oracle = oracles::segment_pair_gauss_integral(a0, a1, b0, b1, 1e-14);
    const double value = edge_pair_solid_angle(a0, a1, b0, b1);
    CHECK(std::fabs(value - oracle) < 1e-9);
}

TEST_CASE("writhe of planar polygons vanishes") {
    const PolygonalCurve circle = make_circle({0, 0, 0}, {0, 0, 1}, 1.0, 64);
    CHECK(writhe(circle) == doctest::Approx(0.0).epsilon(1e-13));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const PolygonalCurve planar = oracles::random_planar_polygon(40, seed);
        const double n2 = static_cast<double>(planar.size()) * planar.size();
        CHECK(std::fabs(writhe(planar)) < 1e-12 * n2);
        // still zero after rotating the plane arbitrarily
        const PolygonalCurve tilted =
            rotate(planar, unit(Vec3{1, 2, 3}), 0.7 + 0.1 * static_cast<double>(seed));
        CHECK(std::fabs(writhe(tilted)) < 1e-12 * n2);
    }
}

TEST_CASE("writhe negates under mirror image") {
    const PolygonalCurve c = make_random_closed_polygon(60, 9);
    CHECK(writhe(mirror_x(c)) == doctest::Approx(-writhe(c)).epsilon(1e-12));
}

TEST_CASE("writhe is invariant under rigid motion and orientation reversal") {
    const PolygonalCurve c = make_random_closed_polygon(50, 12);
    const double w = writhe(c);
    const PolygonalCurve moved =
        translate(rotate(c, unit(Vec3{1, 2, 0.5}), 1.234), {5, -1, 2});
    const double n2 = static_cast<double>(c.size()) * c.size();
    CHECK(std::fabs(writhe(moved) - w) < 1e-12 * n2);
    // each pair kernel value is bitwise identical under reversal; only the
    // compensated summation order differs
    CHECK(writhe(c.reversed()) == doctest::Approx(w).epsilon(1e-14));
}

TEST_CASE("writhe matches the monte carlo oracle on the trefoil") {
    const PolygonalCurve trefoil = make_torus_knot(2, 3, 2.0, 0.5, 256);
    const double w = writhe(trefoil);
    const MonteCarloEstimate mc = writhe_monte_carlo(trefoil, 20000, 1);
    CHECK(std::fabs(mc.estimate - w) <= 3.0 * mc.stderr_);
    // the trefoil writhe is far from zero, so this is a real test
    CHECK(std::fabs(w) > 2.0);
}

TEST_CASE("writhe matches monte carlo on random polygons") {
    for (std::uint64_t seed : {100, 200}) {
        const PolygonalCurve c = make_random_closed_polygon(48, seed);
        const double w = writhe(c);
        const MonteCarloEstimate mc = writhe_monte_carlo(c, 20000, seed + 1);
        CHECK(std::fabs(mc.estimate - w) <= 3.0 * mc.stderr_);
    }
}

TEST_CASE("monte carlo on a planar circle is exactly zero") {
    const PolygonalCurve circle = make_circle({0, 0, 0}, {0, 0, 1}, 1.0, 32);
    const MonteCarloEstimate mc = writhe_monte_carlo(circle, 4000, 3);
    CHECK(mc.estimate == 0.0);
    CHECK(mc.stderr_ == 0.0);
}

TEST_CASE("writhe_system decomposes into writhes plus twice the linking number") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const PolygonalCurve a = make_random_closed_polygon(30, seed);
        const PolygonalCurve b =
            translate(make_random_closed_polygon(26, seed + 50), {12, 0, 0});
        const double sys = writhe_system(CurveSystem({a, b}));
        const double split =
            writhe(a) + writhe(b) + 2.0 * linking_number_gauss(a, b);
        CHECK(sys == doctest::Approx(split).epsilon(1e-12));
        CHECK(std::fabs(sys - split) < 1e-9);
    }
}

TEST_CASE("linking number of far-separated circles is zero") {
    const PolygonalCurve a = make_circle({0, 0, 0}, {0, 0, 1}, 1.0, 48);
    const PolygonalCurve b = make_circle({10, 0, 0}, {0, 1, 0}, 1.0, 48);
    CHECK(std::fabs(linking_number_gauss(a, b)) < 1e-9);
}

TEST_CASE("hopf link has linking number +1") {
    const CurveSystem hopf = make_hopf_link(1.0, 1.0, 64);
    const double lk = linking_number_gauss(hopf.component(0), hopf.component(1));
    CHECK(lk == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(linking_number(hopf.component(0), hopf.component(1)) == 1);
    // separated circles unlink
    const CurveSystem apart = make_hopf_link(3.0, 1.0, 64);
    CHECK(std::fabs(linking_number_gauss(apart.component(0), apart.component(1))) <
          1e-9);
}

TEST_CASE("hopf system writhe equals 2 Lk for planar components") {
    const CurveSystem hopf = make_hopf_link(1.0, 1.0, 64);
    CHECK(writhe_system(hopf) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("(2,4) torus link built from two (1,2) curves has |Lk| = 2") {
    // two (1,2) curves on the same torus, meridian phases pi apart
    auto strand = [](double phase) {
        std::vector<Point3> pts;
        const std::size_t n = 256;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            const double w = 2.0 + 0.5 * std::cos(2.0 * t + phase);
            pts.push_back({w * std::cos(t), w * std::sin(t), 0.5 * std::sin(2.0 * t + phase)});
        }
        return PolygonalCurve(pts);
    };
    const PolygonalCurve a = strand(0.0);
    const PolygonalCurve b = strand(kPi);
    CHECK(std::abs(linking_number(a, b)) == 2);
}

TEST_CASE("total torsion of planar polygons is exactly zero") {
    const PolygonalCurve circle = make_circle({0, 0, 0}, {0, 0, 1}, 1.0, 32);
    CHECK(total_torsion(circle).value == 0.0);
    // non-convex planar polygon: binormal flips must not contribute pi jumps
    const PolygonalCurve zigzag({{0, 0, 0},
                                 {2, 0, 0},
                                 {2, 2, 0},
                                 {1, 0.5, 0},
                                 {0, 2, 0}});
    CHECK(total_torsion(zigzag).value == 0.0);
}

TEST_CASE("total torsion matches the analytic helix") {
    // Right-handed helix r(t) = (a cos t, a sin t, b t); tau = b/(a^2+b^2).
    const double a = 1.0, b = 0.3;
    const double tau = b / (a * a + b * b);
    const int turns = 3;
    const std::size_t n = 1200;
    std::vector<Point3> pts;
    const double t_max = turns * kTwoPi;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({a * std::cos(t), a * std::sin(t), b * t});
    }
    // close with a distant return path; only the helical samples are compared
    pts.push_back({a + 6, 0, b * t_max});
    pts.push_back({a + 6, 0.1, -2});
    pts.push_back({a, -0.2, -1});
    const PolygonalCurve helix(pts);
    const std::vector<double> angles = torsion_angles(helix);
    double helical = 0.0;
    for (std::size_t i = 2; i + 3 < n; ++i) helical += angles[i];
    const double ds = t_max / static_cast<double>(n) * std::sqrt(a * a + b * b);
    const double expected = tau * ds * static_cast<double>(n - 5) / kTwoPi;
    CHECK(helical / kTwoPi == doctest::Approx(expected).epsilon(1e-3));

    // refinement halves the error bound
    std::vector<Point3> pts2;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(2 * n);
        pts2.push_back({a * std::cos(t), a * std::sin(t), b * t});
    }
    pts2.push_back({a + 6, 0, b * t_max});
    pts2.push_back({a + 6, 0.1, -2});
    pts2.push_back({a, -0.2, -1});
    const std::vector<double> angles2 = torsion_angles(PolygonalCurve(pts2));
    double helical2 = 0.0;
    for (std::size_t i = 2; i + 3 < 2 * n; ++i) helical2 += angles2[i];
    const double per_sample = helical / static_cast<double>(n - 5);
    const double per_sample2 = helical2 / static_cast<double>(2 * n - 5);
    const double tau_ds = tau * ds;
    CHECK(std::fabs(per_sample2 - tau_ds / 2.0) < std::fabs(per_sample - tau_ds));
}

TEST_CASE("uniformly rotating framing on a circle has twist k") {
    const PolygonalCurve circle = make_circle({0, 0, 0}, {0, 0, 1}, 1.0, 64);
    for (int k : {1, 2, 5, -3}) {
        const Ribbon ribbon = twisted_frame(circle, {0, 0, 1}, k);
        CHECK(twist(ribbon) == doctest::Approx(k).epsilon(1e-12));
        CHECK(intrinsic_twist(ribbon) == doctest::Approx(k).epsilon(1e-12));
        CHECK(self_linking(ribbon) == doctest::Approx(k).epsilon(1e-10));
    }
}

TEST_CASE("frenet framing has vanishing intrinsic twist") {
    const oracles::FourierLoop loop(21);
    const PolygonalCurve c = loop.sample(2048);
    const Ribbon frenet = frenet_frame(c);
    CHECK(std::fabs(twist(frenet) - total_torsion(c).value) < 1e-6);
}

TEST_CASE("self-linking cross-check against the pushoff linking number") {
    const PolygonalCurve circle = make_circle({0, 0, 0}, {0, 0, 1}, 1.0, 96);
    const Ribbon flat = parallel_transport_frame(circle, {0, 0, 1});
    CHECK(self_linking(flat) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(self_linking_pushoff(flat, 1e-3) == doctest::Approx(0.0).epsilon(1e-6));

    const Ribbon turns = twisted_frame(circle, {0, 0, 1}, 3);
    CHECK(self_linking(turns) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(self_linking_pushoff(turns, 1e-3 * circle.min_edge_length()) ==
          doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("calugareanu-white agreement tightens under refinement") {
    const oracles::FourierLoop loop(31);
    for (std::uint64_t k : {0, 1}) {
        const std::size_t n = 64 << k;
        const PolygonalCurve c = loop.sample(n);
        const Ribbon r = twisted_frame(c, orthogonal_unit(c.vertex_tangent(0)), 2);
        const double sl = self_linking(r);
        const double lk = self_linking_pushoff(r, 1e-3 * c.min_edge_length());
        CHECK(std::fabs(sl - lk) <= 1e-2);
    }
}

TEST_CASE("helicity report satisfies its internal identities") {
    const oracles::FourierLoop loop(5);
    const PolygonalCurve c = loop.sample(128);
    const Ribbon r = twisted_frame(c, orthogonal_unit(c.vertex_tangent(0)), 2);
    const FluxTube tube(r, 1.7);
    const HelicityReport rep = helicity_single(tube);
    CHECK(rep.twist ==
          doctest::Approx(rep.total_torsion + rep.intrinsic_twist).epsilon(1e-12));
    CHECK(rep.self_linking == doctest::Approx(rep.writhe + rep.twist).epsilon(1e-12));
    CHECK(rep.helicity == doctest::Approx(rep.centerline_helicity +
                                          rep.intrinsic_twist_helicity)
                              .epsilon(1e-12));
    CHECK(rep.helicity ==
          doctest::Approx(rep.flux * rep.flux * rep.self_linking).epsilon(1e-12));
}

TEST_CASE("helicity of simple tubes") {
    const PolygonalCurve circle = make_circle({0, 0, 0}, {0, 0, 1}, 1.0, 64);
    const FluxTube untwisted(parallel_transport_frame(circle, {0, 0, 1}), 1.0);
    const HelicityReport flat = helicity_single(untwisted);
    CHECK(flat.helicity == doctest::Approx(0.0).epsilon(1e-10));

    const FluxTube twisted(twisted_frame(circle, {0, 0, 1}, 5), 2.0);
    const HelicityReport spun = helicity_single(twisted);
    CHECK(spun.helicity == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("pair helicity of hopf-linked untwisted tubes is 2 Lk") {
    const CurveSystem hopf = make_hopf_link(1.0, 1.0, 64);
    const PolygonalCurve& a = hopf.component(0);
    const PolygonalCurve& b = hopf.component(1);
    const FluxTube ta(parallel_transport_frame(a, orthogonal_unit(a.vertex_tangent(0))), 1.0);
    const FluxTube tb(parallel_transport_frame(b, orthogonal_unit(b.vertex_tangent(0))), 1.0);
    CHECK(helicity_pair(ta, tb) == doctest::Approx(2.0).epsilon(1e-6));

    // equal-flux identity: H = writhe_system + Tw_a + Tw_b
    const double expected = writhe_system(hopf) + twist(ta.ribbon()) + twist(tb.ribbon());
    CHECK(helicity_pair(ta, tb) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("pair helicity of unlinked untwisted circles vanishes") {
    const PolygonalCurve a = make_circle({0, 0, 0}, {0, 0, 1}, 1.0, 48);
    const PolygonalCurve b = make_circle({6, 0, 0}, {0, 0, 1}, 1.0, 48);
    const FluxTube ta(parallel_transport_frame(a, {0, 0, 1}), 1.0);
    const FluxTube tb(parallel_transport_frame(b, {0, 0, 1}), 1.0);
    CHECK(helicity_pair(ta, tb) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("serial and parallel kernels agree bitwise") {
    const PolygonalCurve c = make_random_closed_polygon(120, 31);
    set_kernel_threads(1);
    const double serial = writhe(c);
    set_kernel_threads(8);
    const double parallel = writhe(c);
    set_kernel_threads(1);
    CHECK(serial == parallel);

    const PolygonalCurve trefoil = make_torus_knot(2, 3, 2.0, 0.5, 128);
    set_kernel_threads(1);
    const MonteCarloEstimate m1 = writhe_monte_carlo(trefoil, 5000, 7);
    set_kernel_threads(7);
    const MonteCarloEstimate m2 = writhe_monte_carlo(trefoil, 5000, 7);
    set_kernel_threads(1);
    CHECK(m1.estimate == m2.estimate);
    CHECK(m1.stderr_ == m2.stderr_);
}
