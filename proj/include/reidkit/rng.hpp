#pragma once

#include <cstdint>

namespace reidkit {

// Source of uniform randomness consumed by the sampling routines. Virtual so
// tests can script exact draw sequences.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual std::uint64_t next_u64() = 0;

    /// Uniform double in [0, 1): (next_u64() >> 11) / 2^53.
    virtual double uniform01();

    /// Uniform double in [lo, hi); returns lo when hi <= lo.
    virtual double uniform(double lo, double hi);

    /// Uniform integer in [lo, hi], both bounds inclusive.
    virtual int uniform_int(int lo, int hi);
};

// Counter-based generator with a fixed algorithm: draw i is
// mix64(seed + i * 0x9E3779B97F4A7C15) with the splitmix64 finalizer as
// mix64. Identical seeds produce identical sequences on every platform;
// the test suite freezes reference values.
class Rng final : public RandomSource {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() override;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace reidkit
