#pragma once

#include <filesystem>
#include <stdexcept>

#include "reidkit/geometry.hpp"
#include "reidkit/image.hpp"

namespace reidkit {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedFormat : IoError {
    using IoError::IoError;
};
struct CorruptData : IoError {
    using IoError::IoError;
};

/// Decodes PPM (P6), PGM (P5), PNG, or JPEG; the format is sniffed from the
/// file's magic bytes. Errors carry the offending path.
Image load_image(const std::filesystem::path& path);

/// Encoder chosen by extension: .ppm, .pgm, .png, .jpg/.jpeg.
/// PPM requires 3 channels and PGM 1; PPM/PGM round-trips are bit-exact.
void save_image(const Image& img, const std::filesystem::path& path);

/// Full-image mask dump as PGM (P5): 0 = kept, 255 = erased.
void save_mask_pgm(const PolygonMask& mask, int img_w, int img_h,
                   const std::filesystem::path& path);

bool is_image_file(const std::filesystem::path& path);  // by extension

}  // namespace reidkit
