#include <doctest.h>

#include "writhe_lab/geometry.hpp"

using namespace writhe_lab;

TEST_CASE("vector algebra basics") {
    const Vec3 a{1, 2, 3};
    const Vec3 b{4, 5, 6};
    CHECK(a.dot(b) == doctest::Approx(32.0));
    const Vec3 c = a.cross(b);
    CHECK(c.x == doctest::Approx(-3.0));
    CHECK(c.y == doctest::Approx(6.0));
    CHECK(c.z == doctest::Approx(-3.0));
    CHECK(Vec3{3, 4, 0}.norm() == doctest::Approx(5.0));
}

TEST_CASE("rotation about an axis") {
    const Vec3 x{1, 0, 0};
    const Vec3 z{0, 0, 1};
    const Vec3 r = rotate_about(x, z, kPi / 2.0);
    CHECK(r.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.y == doctest::Approx(1.0));
    CHECK(signed_angle(x, r, z) == doctest::Approx(kPi / 2.0));
    CHECK(signed_angle(r, x, z) == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("minimal rotation transport") {
    const Vec3 t0{1, 0, 0};
    const Vec3 t1 = unit(Vec3{1, 1, 0});
    const Vec3 v{0, 0, 1};
    const Vec3 w = transport(v, t0, t1);
    // +z is orthogonal to the rotation plane, so it is unchanged
    CHECK(w.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w.z == doctest::Approx(1.0));
    // a vector in the rotation plane turns with the tangent
    const Vec3 p{0, 1, 0};
    const Vec3 q = transport(p, t0, t1);
    CHECK(q.dot(t1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q.norm() == doctest::Approx(1.0));
}

TEST_CASE("segment-segment distance") {
    CHECK(segment_segment_distance({0, 0, 0}, {1, 0, 0}, {0, 0, 1}, {1, 0, 1}) ==
          doctest::Approx(1.0));
    CHECK(segment_segment_distance({0, 0, 0}, {2, 0, 0}, {1, -1, 3}, {1, 1, 3}) ==
          doctest::Approx(3.0));
    // crossing segments
    CHECK(segment_segment_distance({0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("kahan summation compensates") {
    KahanSum sum;
    sum.add(1.0);
    for (int i = 0; i < 10000000; ++i) sum.add(1e-16);
    CHECK(sum.value() == doctest::Approx(1.0 + 1e-9).epsilon(1e-12));
}
