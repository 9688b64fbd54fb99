#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace reidkit {

// 8-bit image, row-major, channel-interleaved. channels is 1 or 3.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    static Image make(int width, int height, int channels, std::uint8_t fill = 0);

    std::size_t offset(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    std::uint8_t& at(int x, int y, int c) { return data[offset(x, y, c)]; }
    std::uint8_t at(int x, int y, int c) const { return data[offset(x, y, c)]; }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    bool valid() const {
        return width >= 1 && height >= 1 && (channels == 1 || channels == 3) &&
               data.size() == pixel_count() * static_cast<std::size_t>(channels);
    }

    bool operator==(const Image&) const = default;
};

}  // namespace reidkit
