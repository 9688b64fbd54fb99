#include "reidkit/rng.hpp"

namespace reidkit {

double RandomSource::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
    if (hi <= lo) {
        next_u64();  // keep the draw count independent of the bounds
        return lo;
    }
    return lo + uniform01() * (hi - lo);
}

int RandomSource::uniform_int(int lo, int hi) {
    if (hi <= lo) {
        next_u64();
        return lo;
    }
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<int>(next_u64() % range);
}

std::uint64_t Rng::next_u64() {
    ++counter_;
    std::uint64_t z = seed_ + counter_ * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace reidkit
