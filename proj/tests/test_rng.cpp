#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "reidkit/rng.hpp"

using namespace reidkit;

TEST_CASE("identical seeds give identical sequences") {
    Rng a(123456789), b(123456789);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("frozen reference sequence for seed 42") {
    // Pins the generator algorithm; a change here breaks every consumer's
    // reproducibility contract.
    Rng rng(42);
    CHECK(rng.next_u64() == 0xBDD732262FEB6E95ULL);
    CHECK(rng.next_u64() == 0x28EFE333B266F103ULL);
    CHECK(rng.next_u64() == 0x47526757130F9F52ULL);
    Rng again(42);
    CHECK(again.uniform01() == doctest::Approx(0.74156487877182331).epsilon(1e-16));
}

TEST_CASE("uniform01 stays in [0,1)") {
    Rng rng(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform respects bounds and degenerate ranges") {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform(2.5, 7.5);
        CHECK(u >= 2.5);
        CHECK(u <= 7.5);
    }
    CHECK(rng.uniform(3.0, 3.0) == 3.0);
    CHECK(rng.uniform(5.0, 1.0) == 5.0);
}

TEST_CASE("uniform_int covers the inclusive range") {
    Rng rng(13);
    std::vector<int> counts(6, 0);
    for (int i = 0; i < 60000; ++i) {
        const int v = rng.uniform_int(10, 15);
        REQUIRE(v >= 10);
        REQUIRE(v <= 15);
        ++counts[v - 10];
    }
    for (int c : counts) CHECK(c > 9000);  // ~10000 each
    CHECK(rng.uniform_int(4, 4) == 4);
}

TEST_CASE("draw count advances uniformly across helpers") {
    // Each helper consumes exactly one u64, keeping call sites' draw
    // sequences alignable across code paths.
    Rng rng(99);
    rng.uniform01();
    CHECK(rng.draws() == 1);
    rng.uniform(0.0, 1.0);
    CHECK(rng.draws() == 2);
    rng.uniform(1.0, 1.0);
    CHECK(rng.draws() == 3);
    rng.uniform_int(0, 255);
    CHECK(rng.draws() == 4);
}

TEST_CASE("nearby seeds decorrelate") {
    Rng a(1), b(2);
    int equal = 0;
    for (int i = 0; i < 1000; ++i) {
        if ((a.next_u64() & 0xFF) == (b.next_u64() & 0xFF)) ++equal;
    }
    CHECK(equal < 30);  // ~1/256 expected collisions
}
