#include "reidkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace reidkit {

std::vector<Point> convex_hull(std::vector<Point> points) {
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());

    const std::size_t n = points.size();
    if (n < 3) return points;

    std::vector<Point> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
        while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);  // last point repeats the first
    return hull;
}

bool is_strictly_convex_ccw(const std::vector<Point>& hull) {
    const std::size_t m = hull.size();
    if (m < 3) return false;
    for (std::size_t i = 0; i < m; ++i) {
        if (cross(hull[i], hull[(i + 1) % m], hull[(i + 2) % m]) <= 0) return false;
    }
    return true;
}

bool point_in_convex_polygon(const std::vector<Point>& hull, const Point& p) {
    const std::size_t m = hull.size();
    if (m == 0) return false;
    if (m == 1) return hull[0] == p;
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < m; ++i) {
        const double c = cross(hull[i], hull[(i + 1) % m], p);
        if (c > 0) has_pos = true;
        if (c < 0) has_neg = true;
        if (has_pos && has_neg) return false;
    }
    if (m == 2) {
        // Degenerate segment: on the supporting line, within the box.
        const double lo_x = std::min(hull[0].x, hull[1].x), hi_x = std::max(hull[0].x, hull[1].x);
        const double lo_y = std::min(hull[0].y, hull[1].y), hi_y = std::max(hull[0].y, hull[1].y);
        return p.x >= lo_x && p.x <= hi_x && p.y >= lo_y && p.y <= hi_y;
    }
    return true;
}

std::size_t PolygonMask::covered_count() const {
    return static_cast<std::size_t>(std::count(covered.begin(), covered.end(), std::uint8_t{1}));
}

namespace {

// First/last pixel index whose center falls in [lo, hi]. Coordinates are
// clamped so that wildly out-of-image hulls cannot overflow the int cast.
int first_center_at_or_after(double lo) {
    return static_cast<int>(std::ceil(std::clamp(lo, -1e9, 1e9) - 0.5));
}
int last_center_at_or_before(double hi) {
    return static_cast<int>(std::floor(std::clamp(hi, -1e9, 1e9) - 0.5));
}

}  // namespace

PolygonMask rasterize_convex_polygon(std::vector<Point> hull, int img_w, int img_h) {
    PolygonMask mask;
    mask.hull = std::move(hull);
    if (mask.hull.size() < 3) return mask;

    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (const Point& v : mask.hull) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }

    mask.box.x0 = std::max(0, first_center_at_or_after(min_x));
    mask.box.x1 = std::min(img_w - 1, last_center_at_or_before(max_x));
    mask.box.y0 = std::max(0, first_center_at_or_after(min_y));
    mask.box.y1 = std::min(img_h - 1, last_center_at_or_before(max_y));
    if (mask.box.empty()) {
        mask.box = PixelBox{};
        return mask;
    }

    mask.covered.assign(mask.box.area(), 0);
    const std::size_t m = mask.hull.size();
    const int bw = mask.box.width();

    for (int y = mask.box.y0; y <= mask.box.y1; ++y) {
        const double yc = y + 0.5;
        if (yc < min_y || yc > max_y) continue;

        // Conservative span from edge/scanline intersections.
        double span_lo = std::numeric_limits<double>::infinity(), span_hi = -span_lo;
        for (std::size_t i = 0; i < m; ++i) {
            const Point& a = mask.hull[i];
            const Point& b = mask.hull[(i + 1) % m];
            if ((a.y <= yc && b.y >= yc) || (b.y <= yc && a.y >= yc)) {
                if (a.y == b.y) {
                    span_lo = std::min({span_lo, a.x, b.x});
                    span_hi = std::max({span_hi, a.x, b.x});
                } else {
                    const double t = (yc - a.y) / (b.y - a.y);
                    const double x = a.x + t * (b.x - a.x);
                    span_lo = std::min(span_lo, x);
                    span_hi = std::max(span_hi, x);
                }
            }
        }
        if (span_lo > span_hi) continue;

        const int xa = std::max(mask.box.x0, first_center_at_or_after(span_lo) - 1);
        const int xb = std::min(mask.box.x1, last_center_at_or_before(span_hi) + 1);
        std::uint8_t* row = mask.covered.data() + static_cast<std::size_t>(y - mask.box.y0) * bw;
        for (int x = xa; x <= xb; ++x) {
            if (point_in_convex_polygon(mask.hull, Point{x + 0.5, yc})) row[x - mask.box.x0] = 1;
        }
    }
    return mask;
}

}  // namespace reidkit
