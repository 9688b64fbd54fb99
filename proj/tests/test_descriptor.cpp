#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "reidkit/descriptor.hpp"
#include "reidkit/feature_io.hpp"
#include "reidkit/rng.hpp"
#include "test_util.hpp"

using namespace reidkit;
using testutil::TempDir;

namespace {

std::vector<double> branch_vector(BranchId id, double fill) {
    return std::vector<double>(static_cast<std::size_t>(branch_dim(id)), fill);
}

FeatureSet random_features(std::uint64_t seed, int n, int d, int max_pid = 8, int cams = 4) {
    Rng rng(seed);
    FeatureSet set;
    set.values = Mat(n, d);
    for (double& x : set.values.v) x = rng.uniform(-1.0, 1.0);
    set.person_ids.resize(n);
    set.camera_ids.resize(n);
    for (int i = 0; i < n; ++i) {
        set.person_ids[i] = rng.uniform_int(0, max_pid - 1);
        set.camera_ids[i] = rng.uniform_int(0, cams - 1);
    }
    return set;
}

}  // namespace

TEST_CASE("descriptor dimensions match the published feature dims") {
    std::vector<std::pair<BranchId, std::vector<double>>> base;
    for (BranchId id : {BranchId::G1, BranchId::G4, BranchId::P4_1, BranchId::P4_2,
                        BranchId::P4_3, BranchId::P4_4}) {
        base.emplace_back(id, branch_vector(id, 0.5));
    }
    CHECK(compose_descriptor(base).size() == 2048);

    auto full = base;
    full.emplace_back(BranchId::R, branch_vector(BranchId::R, 1.0));
    CHECK(compose_descriptor(full).size() == 2560);

    CHECK(compose_descriptor({{BranchId::G1, branch_vector(BranchId::G1, 0.0)}}).size() == 512);
}

TEST_CASE("composition is canonical regardless of the input order") {
    std::vector<std::pair<BranchId, std::vector<double>>> parts{
        {BranchId::R, branch_vector(BranchId::R, 3.0)},
        {BranchId::G1, branch_vector(BranchId::G1, 1.0)},
        {BranchId::P4_2, branch_vector(BranchId::P4_2, 2.0)},
    };
    const auto descriptor = compose_descriptor(parts);
    REQUIRE(descriptor.size() == 512u + 256u + 512u);
    CHECK(descriptor.front() == 1.0);            // G1 first
    CHECK(descriptor[512] == 2.0);               // then P4_2
    CHECK(descriptor[512 + 256] == 3.0);         // R last
}

TEST_CASE("duplicate branches and wrong dims are rejected") {
    CHECK_THROWS_AS(compose_descriptor({{BranchId::G1, branch_vector(BranchId::G1, 0.0)},
                                        {BranchId::G1, branch_vector(BranchId::G1, 1.0)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(compose_descriptor({{BranchId::G1, std::vector<double>(256, 0.0)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(compose_descriptor({}), std::invalid_argument);
}

TEST_CASE("compose then split round-trips branch features") {
    Rng rng(31);
    std::vector<std::pair<BranchId, std::vector<double>>> parts;
    const std::vector<BranchId> layout{BranchId::G1, BranchId::G4, BranchId::P4_1, BranchId::P4_2,
                                       BranchId::P4_3, BranchId::P4_4, BranchId::R};
    for (BranchId id : layout) {
        std::vector<double> v(static_cast<std::size_t>(branch_dim(id)));
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
        parts.emplace_back(id, std::move(v));
    }
    const auto descriptor = compose_descriptor(parts);
    const auto back = split_descriptor(descriptor, layout);
    REQUIRE(back.size() == parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        CHECK(back[i].first == parts[i].first);
        CHECK(back[i].second == parts[i].second);
    }
}

TEST_CASE("branch names round-trip") {
    for (BranchId id : kAllBranches) {
        CHECK(branch_from_name(branch_name(id)) == id);
    }
    CHECK_FALSE(branch_from_name("nope").has_value());
}

TEST_CASE("l2_normalize") {
    const auto unit = l2_normalize(std::vector<double>{3.0, 4.0});
    CHECK(unit[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(unit[1] == doctest::Approx(0.8).epsilon(1e-15));

    const std::vector<double> already{1.0, 0.0, 0.0};
    const auto same = l2_normalize(already);
    for (std::size_t i = 0; i < already.size(); ++i) {
        CHECK(same[i] == doctest::Approx(already[i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(l2_normalize(std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("distance matrix: identical vectors and orthonormal axes") {
    FeatureSet one;
    one.values = Mat(1, 3);
    one.values.v = {0.2, -0.4, 1.0};
    one.person_ids = {1};
    one.camera_ids = {1};
    CHECK(distance_matrix(one, one, Metric::euclidean)(0, 0) == 0.0);
    CHECK(distance_matrix(one, one, Metric::cosine)(0, 0) == doctest::Approx(0.0).epsilon(1e-15));

    FeatureSet e1 = one, e2 = one;
    e1.values.v = {1.0, 0.0, 0.0};
    e2.values.v = {0.0, 1.0, 0.0};
    CHECK(distance_matrix(e1, e2, Metric::euclidean)(0, 0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(distance_matrix(e1, e2, Metric::cosine)(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("distance matrix equals the naive oracle bit-for-bit") {
    const FeatureSet q = random_features(41, 5, 3);
    const FeatureSet g = random_features(42, 4, 3);
    for (Metric metric : {Metric::euclidean, Metric::cosine}) {
        const Mat fast = distance_matrix(q, g, metric);
        const Mat naive = oracle::distance_matrix(q, g, metric);
        REQUIRE(fast.v.size() == naive.v.size());
        for (std::size_t i = 0; i < fast.v.size(); ++i) CHECK(fast.v[i] == naive.v[i]);
    }
}

TEST_CASE("multi-threaded distance matrix is identical to single-threaded") {
    const FeatureSet q = random_features(43, 37, 16);
    const FeatureSet g = random_features(44, 29, 16);
    for (Metric metric : {Metric::euclidean, Metric::cosine}) {
        const Mat serial = distance_matrix(q, g, metric, 1);
        const Mat parallel = distance_matrix(q, g, metric, 4);
        CHECK(serial.v == parallel.v);
    }
}

TEST_CASE("self-distance matrix is symmetric with a zero diagonal") {
    const FeatureSet a = random_features(45, 12, 6);
    for (Metric metric : {Metric::euclidean, Metric::cosine}) {
        const Mat d = distance_matrix(a, a, metric);
        for (int i = 0; i < d.rows; ++i) {
            CHECK(std::abs(d(i, i)) <= 1e-12);
            for (int j = 0; j < d.cols; ++j) {
                CHECK(std::abs(d(i, j) - d(j, i)) <= 1e-12);
                if (metric == Metric::cosine) {
                    CHECK(d(i, j) >= -1e-12);
                    CHECK(d(i, j) <= 2.0 + 1e-12);
                } else {
                    CHECK(d(i, j) >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("euclidean triangle inequality on random triples") {
    const FeatureSet a = random_features(46, 15, 5);
    const Mat d = distance_matrix(a, a, Metric::euclidean);
    Rng rng(47);
    for (int t = 0; t < 200; ++t) {
        const int i = rng.uniform_int(0, 14), j = rng.uniform_int(0, 14),
                  k = rng.uniform_int(0, 14);
        CHECK(d(i, k) <= d(i, j) + d(j, k) + 1e-12);
    }
}

TEST_CASE("dimension mismatch is rejected") {
    const FeatureSet q = random_features(48, 3, 4);
    const FeatureSet g = random_features(49, 3, 5);
    CHECK_THROWS_AS(distance_matrix(q, g, Metric::euclidean), std::invalid_argument);
}

TEST_CASE("REIDFEAT round-trip is bit-exact") {
    TempDir dir("reidfeat");
    FeatureSet set = random_features(50, 9, 7);
    set.flags = 0x01;
    const auto path = dir.path / "features.reidfeat";
    save_features(set, path);
    const std::string bytes = testutil::read_file(path);
    REQUIRE(bytes.size() == 8u + 12u + 9u * (8u + 4u * 7u));
    CHECK(bytes.substr(0, 8) == "REIDFT01");

    const FeatureSet loaded = load_features(path);
    CHECK(loaded.person_ids == set.person_ids);
    CHECK(loaded.camera_ids == set.camera_ids);
    CHECK(loaded.flags == set.flags);

    const auto path2 = dir.path / "again.reidfeat";
    save_features(loaded, path2);
    CHECK(testutil::read_file(path2) == bytes);
}

TEST_CASE("REIDFEAT sidecar records the branch layout") {
    TempDir dir("reidfeat-sidecar");
    FeatureSet set;
    set.values = Mat(2, 2048);
    for (std::size_t i = 0; i < set.values.v.size(); ++i) {
        set.values.v[i] = static_cast<double>(i % 97) / 97.0;
    }
    set.person_ids = {1, 2};
    set.camera_ids = {0, 1};
    set.layout = {BranchId::G1, BranchId::G4, BranchId::P4_1, BranchId::P4_2, BranchId::P4_3,
                  BranchId::P4_4};
    const auto path = dir.path / "with-layout.reidfeat";
    save_features(set, path);
    CHECK(std::filesystem::exists(dir.path / "with-layout.reidfeat.json"));
    const FeatureSet loaded = load_features(path);
    CHECK(loaded.layout == set.layout);
}

TEST_CASE("REIDFEAT rejects malformed files") {
    TempDir dir("reidfeat-bad");
    const auto bad_magic = dir.path / "bad.reidfeat";
    testutil::write_file(bad_magic, "NOTAFEATFILE....");
    CHECK_THROWS_AS(load_features(bad_magic), FeatureFormatError);

    FeatureSet set = random_features(51, 3, 4);
    const auto good = dir.path / "good.reidfeat";
    save_features(set, good);
    std::string bytes = testutil::read_file(good);
    testutil::write_file(dir.path / "truncated.reidfeat", bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(load_features(dir.path / "truncated.reidfeat"), FeatureFormatError);
    testutil::write_file(dir.path / "trailing.reidfeat", bytes + "x");
    CHECK_THROWS_AS(load_features(dir.path / "trailing.reidfeat"), FeatureFormatError);
}
