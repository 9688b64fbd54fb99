#include "reidkit/image.hpp"

#include <stdexcept>

namespace reidkit {

Image Image::make(int width, int height, int channels, std::uint8_t fill) {
    if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
        throw std::invalid_argument("Image::make: bad dimensions");
    }
    Image img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
    return img;
}

}  // namespace reidkit
