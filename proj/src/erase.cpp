#include "reidkit/erase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reidkit {

void EraseConfig::validate() const {
    if (!(probability >= 0.0 && probability <= 1.0)) {
        throw std::invalid_argument("EraseConfig: probability must be in [0,1]");
    }
    if (!(area_lo > 0.0 && area_lo <= area_hi && area_hi < 1.0)) {
        throw std::invalid_argument("EraseConfig: need 0 < s_l <= s_h < 1");
    }
    if (!(aspect > 0.0 && aspect < 1.0)) {
        throw std::invalid_argument("EraseConfig: aspect bound must be in (0,1)");
    }
    if (vertices < 3) throw std::invalid_argument("EraseConfig: need at least 3 vertices");
    if (max_attempts < 1) throw std::invalid_argument("EraseConfig: max_attempts must be positive");
}

double EraseRegion::clamped_x_min(int) const { return std::max(cx - width / 2.0, 0.0); }
double EraseRegion::clamped_x_max(int img_w) const {
    return std::min(cx + width / 2.0, static_cast<double>(img_w));
}
double EraseRegion::clamped_y_min(int) const { return std::max(cy - height / 2.0, 0.0); }
double EraseRegion::clamped_y_max(int img_h) const {
    return std::min(cy + height / 2.0, static_cast<double>(img_h));
}

namespace {

// Shared by the public sampler and inject_occlusion, whose level=1 edge sits
// outside the EraseConfig invariant s_h < 1.
std::optional<EraseRegion> sample_region_unchecked(const EraseConfig& cfg, int img_w, int img_h,
                                                   RandomSource& rng) {
    const double area = static_cast<double>(img_w) * static_cast<double>(img_h);
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        const double se = rng.uniform(cfg.area_lo, cfg.area_hi);
        const double re = rng.uniform(cfg.aspect, 1.0 / cfg.aspect);
        const double we = std::sqrt(area * se / re);
        const double he = std::sqrt(area * se * re);
        if (we <= img_w && he <= img_h) {
            EraseRegion region;
            region.width = we;
            region.height = he;
            region.cx = rng.uniform(we / 2.0, img_w - we / 2.0);
            region.cy = rng.uniform(he / 2.0, img_h - he / 2.0);
            return region;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<EraseRegion> sample_erase_region(const EraseConfig& cfg, int img_w, int img_h,
                                               RandomSource& rng) {
    cfg.validate();
    if (img_w < 1 || img_h < 1) throw std::invalid_argument("sample_erase_region: empty image");
    return sample_region_unchecked(cfg, img_w, img_h, rng);
}

PolygonMask build_polygon_mask(const EraseRegion& region, int img_w, int img_h, int vertices,
                               RandomSource& rng, int max_attempts) {
    if (vertices < 3) throw std::invalid_argument("build_polygon_mask: need at least 3 vertices");
    const double x_min = region.clamped_x_min(img_w);
    const double x_max = region.clamped_x_max(img_w);
    const double y_min = region.clamped_y_min(img_h);
    const double y_max = region.clamped_y_max(img_h);

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<Point> points(static_cast<std::size_t>(vertices));
        for (Point& p : points) {
            p.x = rng.uniform(x_min, x_max);
            p.y = rng.uniform(y_min, y_max);
        }
        std::vector<Point> hull = convex_hull(std::move(points));
        if (hull.size() >= 3) return rasterize_convex_polygon(std::move(hull), img_w, img_h);
    }
    return rectangle_mask(region, img_w, img_h);
}

PolygonMask rectangle_mask(const EraseRegion& region, int img_w, int img_h) {
    const double x_min = region.clamped_x_min(img_w);
    const double x_max = region.clamped_x_max(img_w);
    const double y_min = region.clamped_y_min(img_h);
    const double y_max = region.clamped_y_max(img_h);
    std::vector<Point> corners{
        {x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}};
    return rasterize_convex_polygon(std::move(corners), img_w, img_h);
}

namespace {

void fill_mask(Image& img, const PolygonMask& mask, bool per_pixel, RandomSource& rng) {
    if (mask.box.empty()) return;
    int shared = 0;
    if (!per_pixel) shared = rng.uniform_int(0, 255);
    for (int y = mask.box.y0; y <= mask.box.y1; ++y) {
        for (int x = mask.box.x0; x <= mask.box.x1; ++x) {
            if (!mask.covered_at(x, y)) continue;
            for (int c = 0; c < img.channels; ++c) {
                img.at(x, y, c) =
                    static_cast<std::uint8_t>(per_pixel ? rng.uniform_int(0, 255) : shared);
            }
        }
    }
}

enum class MaskKind { rectangle, polygon };

EraseResult erase_impl(const Image& img, const EraseConfig& cfg, MaskKind kind,
                       RandomSource& rng) {
    EraseResult result;
    result.image = img;
    const double p1 = rng.uniform01();
    if (p1 >= cfg.probability) return result;

    std::optional<EraseRegion> region =
        sample_region_unchecked(cfg, img.width, img.height, rng);
    if (!region) {
        result.no_fit = true;
        return result;
    }
    result.mask = kind == MaskKind::rectangle
                      ? rectangle_mask(*region, img.width, img.height)
                      : build_polygon_mask(*region, img.width, img.height, cfg.vertices, rng,
                                           cfg.max_attempts);
    fill_mask(result.image, result.mask, cfg.per_pixel_noise, rng);
    result.applied = true;
    return result;
}

}  // namespace

EraseResult rpe_erase(const Image& img, const EraseConfig& cfg, RandomSource& rng) {
    cfg.validate();
    if (!img.valid()) throw std::invalid_argument("rpe_erase: invalid image");
    return erase_impl(img, cfg, MaskKind::polygon, rng);
}

EraseResult re_erase(const Image& img, const EraseConfig& cfg, RandomSource& rng) {
    cfg.validate();
    if (!img.valid()) throw std::invalid_argument("re_erase: invalid image");
    return erase_impl(img, cfg, MaskKind::rectangle, rng);
}

Image inject_occlusion(const Image& img, double level, OcclusionMode mode, RandomSource& rng) {
    if (!(level >= 0.0 && level <= 1.0)) {
        throw std::invalid_argument("inject_occlusion: level must be in [0,1]");
    }
    if (!img.valid()) throw std::invalid_argument("inject_occlusion: invalid image");
    if (level == 0.0) return img;

    EraseConfig cfg;  // paper defaults for aspect/vertices, forced gate and area
    cfg.probability = 1.0;
    cfg.area_lo = level;
    cfg.area_hi = level;

    Image out = img;
    if (mode == OcclusionMode::re || mode == OcclusionMode::re_plus_rpe) {
        out = erase_impl(out, cfg, MaskKind::rectangle, rng).image;
    }
    if (mode == OcclusionMode::rpe || mode == OcclusionMode::re_plus_rpe) {
        out = erase_impl(out, cfg, MaskKind::polygon, rng).image;
    }
    return out;
}

}  // namespace reidkit
