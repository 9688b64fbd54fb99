#pragma once

#include <optional>

#include "reidkit/geometry.hpp"
#include "reidkit/image.hpp"
#include "reidkit/rng.hpp"

namespace reidkit {

// Erasing parameters. Defaults: p=0.5, area ratio in [0.02, 0.45], aspect
// bound 0.35 (ratio drawn from [r, 1/r]), 20 polygon vertices.
struct EraseConfig {
    double probability = 0.5;  // p: chance an image is erased at all
    double area_lo = 0.02;     // s_l
    double area_hi = 0.45;     // s_h
    double aspect = 0.35;      // r, in (0,1)
    int vertices = 20;         // n >= 3
    int max_attempts = 100;    // placement retry budget
    bool per_pixel_noise = true;  // false: one shared random value per region

    void validate() const;  // throws std::invalid_argument
};

// A placed erase region in continuous image coordinates.
struct EraseRegion {
    double width = 0.0;   // W_e
    double height = 0.0;  // H_e
    double cx = 0.0;      // P_c,x
    double cy = 0.0;      // P_c,y

    double clamped_x_min(int img_w) const;
    double clamped_x_max(int img_w) const;
    double clamped_y_min(int img_h) const;
    double clamped_y_max(int img_h) const;
};

/// Draws (s_e, r_e) pairs until W_e = sqrt(S*s_e/r_e) and H_e = sqrt(S*s_e*r_e)
/// fit the image, then places the center uniformly in
/// (W_e/2, W-W_e/2) x (H_e/2, H-H_e/2). Returns nullopt once the attempt
/// budget is exhausted (no-fit).
std::optional<EraseRegion> sample_erase_region(const EraseConfig& cfg, int img_w, int img_h,
                                               RandomSource& rng);

/// Samples `vertices` points uniformly in the region's clamped bounding box
/// and rasterizes their convex hull. A degenerate (collinear) point set is
/// resampled up to `max_attempts` times, then the full bounding rectangle is
/// used as a fallback.
PolygonMask build_polygon_mask(const EraseRegion& region, int img_w, int img_h, int vertices,
                               RandomSource& rng, int max_attempts = 100);

/// Coverage of the full (clamped) region rectangle.
PolygonMask rectangle_mask(const EraseRegion& region, int img_w, int img_h);

struct EraseResult {
    Image image;
    bool applied = false;  // gate fired and a region was placed
    bool no_fit = false;   // gate fired but no region fit within the budget
    PolygonMask mask;      // meaningful only when applied
};

/// Random polygon erasing. Gate: draw p1 in [0,1); if p1 >= p the input is
/// returned unchanged. Otherwise covered pixels are overwritten with uniform
/// random values in [0,255] (independently per pixel and channel, or one
/// shared value when cfg.per_pixel_noise is false); all other pixels are
/// bit-identical to the input.
EraseResult rpe_erase(const Image& img, const EraseConfig& cfg, RandomSource& rng);

/// Rectangular erasing: as rpe_erase with the full W_e x H_e rectangle.
EraseResult re_erase(const Image& img, const EraseConfig& cfg, RandomSource& rng);

enum class OcclusionMode { re, rpe, re_plus_rpe };

/// Occludes with probability 1 at a fixed erased-area ratio (s_l = s_h =
/// level). Level 0 is the identity; re_plus_rpe applies both erasers
/// sequentially with independent regions. Throws std::invalid_argument for
/// level outside [0,1].
Image inject_occlusion(const Image& img, double level, OcclusionMode mode, RandomSource& rng);

}  // namespace reidkit
