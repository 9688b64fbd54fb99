#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace reidkit {

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

/// Cross product of (a - o) x (b - o).
inline double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Monotone-chain convex hull, counter-clockwise, no repeated first vertex.
/// Collinear points are dropped; degenerate input collapses to < 3 vertices.
std::vector<Point> convex_hull(std::vector<Point> points);

/// True when every consecutive edge pair turns strictly counter-clockwise.
bool is_strictly_convex_ccw(const std::vector<Point>& hull);

/// Containment test for a convex polygon; points exactly on an edge count as
/// inside. Orientation-agnostic.
bool point_in_convex_polygon(const std::vector<Point>& hull, const Point& p);

// Inclusive pixel-index rectangle; empty when x0 > x1 or y0 > y1.
struct PixelBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = -1;
    int y1 = -1;

    bool empty() const { return x1 < x0 || y1 < y0; }
    int width() const { return empty() ? 0 : x1 - x0 + 1; }
    int height() const { return empty() ? 0 : y1 - y0 + 1; }
    std::size_t area() const {
        return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
    }
    bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

// Convex erase region: hull vertices plus a per-pixel coverage raster over
// the bounding box. Pixel (x, y) is covered when its center (x+0.5, y+0.5)
// lies inside or on the hull.
struct PolygonMask {
    std::vector<Point> hull;        // counter-clockwise
    PixelBox box;                   // clamped to the image
    std::vector<std::uint8_t> covered;  // box.width() * box.height(), row-major

    bool covered_at(int x, int y) const {
        if (!box.contains(x, y)) return false;
        return covered[static_cast<std::size_t>(y - box.y0) * box.width() + (x - box.x0)] != 0;
    }
    std::size_t covered_count() const;
};

/// Scanline rasterization of a convex hull over pixel centers, clamped to an
/// img_w x img_h grid. Row spans come from edge intersections; the exact
/// containment predicate arbitrates pixels near the span ends, so coverage
/// does not depend on intersection rounding.
PolygonMask rasterize_convex_polygon(std::vector<Point> hull, int img_w, int img_h);

}  // namespace reidkit
