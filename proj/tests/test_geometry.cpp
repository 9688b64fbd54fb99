#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "reidkit/geometry.hpp"
#include "reidkit/rng.hpp"

using namespace reidkit;

TEST_CASE("hull of a square is its four corners") {
    std::vector<Point> pts{{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}, {1, 3}};
    const auto hull = convex_hull(pts);
    REQUIRE(hull.size() == 4);
    CHECK(is_strictly_convex_ccw(hull));
    for (const Point& corner : {Point{0, 0}, Point{4, 0}, Point{4, 4}, Point{0, 4}}) {
        CHECK(std::count(hull.begin(), hull.end(), corner) == 1);
    }
}

TEST_CASE("collinear input degenerates to two vertices") {
    std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const auto hull = convex_hull(pts);
    CHECK(hull.size() == 2);
    CHECK_FALSE(is_strictly_convex_ccw(hull));
}

TEST_CASE("random hulls are strictly convex and contain their input") {
    Rng rng(70001);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> pts(20);
        for (Point& p : pts) {
            p.x = rng.uniform(0.0, 100.0);
            p.y = rng.uniform(0.0, 60.0);
        }
        const auto hull = convex_hull(pts);
        REQUIRE(hull.size() >= 3);
        CHECK(is_strictly_convex_ccw(hull));
        for (const Point& p : pts) CHECK(point_in_convex_polygon(hull, p));
    }
}

TEST_CASE("boundary pixel centers count as covered") {
    // Unit-square hull whose edges pass exactly through pixel centers.
    std::vector<Point> hull{{0.5, 0.5}, {4.5, 0.5}, {4.5, 3.5}, {0.5, 3.5}};
    const PolygonMask mask = rasterize_convex_polygon(hull, 10, 10);
    CHECK(mask.box.x0 == 0);
    CHECK(mask.box.x1 == 4);
    CHECK(mask.box.y0 == 0);
    CHECK(mask.box.y1 == 3);
    CHECK(mask.covered_count() == 5 * 4);  // centers on the edges included
    CHECK(mask.covered_at(0, 0));
    CHECK(mask.covered_at(4, 3));
    CHECK_FALSE(mask.covered_at(5, 0));
}

TEST_CASE("raster equals the per-pixel containment oracle") {
    Rng rng(70002);
    for (int trial = 0; trial < 100; ++trial) {
        const int img_w = 3 + rng.uniform_int(0, 60);
        const int img_h = 3 + rng.uniform_int(0, 60);
        std::vector<Point> pts(static_cast<std::size_t>(3 + rng.uniform_int(0, 25)));
        for (Point& p : pts) {
            p.x = rng.uniform(-5.0, img_w + 5.0);  // hulls may spill over the image
            p.y = rng.uniform(-5.0, img_h + 5.0);
        }
        const auto hull = convex_hull(pts);
        if (hull.size() < 3) continue;
        const PolygonMask mask = rasterize_convex_polygon(hull, img_w, img_h);

        CHECK(mask.box.x0 >= 0);
        CHECK(mask.box.y0 >= 0);
        CHECK(mask.box.x1 <= img_w - 1);
        CHECK(mask.box.y1 <= img_h - 1);
        if (mask.box.empty()) continue;
        const auto expected = oracle::raster_by_containment(mask.hull, mask.box);
        REQUIRE(mask.covered.size() == expected.size());
        CHECK(mask.covered == expected);
    }
}

TEST_CASE("coverage never leaks outside the hull bbox") {
    std::vector<Point> hull{{10.2, 7.7}, {19.8, 9.1}, {15.5, 18.3}};
    const PolygonMask mask = rasterize_convex_polygon(hull, 32, 32);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            if (mask.covered_at(x, y)) {
                CHECK(x + 0.5 >= 10.2);
                CHECK(x + 0.5 <= 19.8);
                CHECK(y + 0.5 >= 7.7);
                CHECK(y + 0.5 <= 18.3);
            }
        }
    }
}

TEST_CASE("degenerate hulls rasterize to nothing") {
    CHECK(rasterize_convex_polygon({{1, 1}, {5, 5}}, 10, 10).covered_count() == 0);
    CHECK(rasterize_convex_polygon({{2, 2}}, 10, 10).covered_count() == 0);
}

TEST_CASE("sub-pixel hull between centers covers nothing") {
    // Hull sits strictly between the centers (0.5, ...) and (1.5, ...).
    std::vector<Point> hull{{0.6, 0.6}, {0.9, 0.6}, {0.9, 0.9}, {0.6, 0.9}};
    const PolygonMask mask = rasterize_convex_polygon(hull, 4, 4);
    CHECK(mask.covered_count() == 0);
}
