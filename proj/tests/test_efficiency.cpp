#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reidkit/efficiency.hpp"

using namespace reidkit;

namespace {

// Published comparison set: AlignedReID, PCB, HPM, MGN plus the four
// configuration variants.
std::vector<ModelProfile> published_profiles() {
    return {
        {"AlignedReID", 91.8, 79.3, 2048, 100, 207},
        {"PCB", 93.1, 81.0, 1536, 102, 192},
        {"HPM", 94.2, 82.7, 3840, 356, 82},
        {"MGN", 95.7, 86.9, 2816, 263, 112},
        {"HENet(Base)", 92.9, 79.6, 2048, 169, 160},
        {"HENet(+RPE)", 93.6, 81.2, 2048, 169, 160},
        {"HENet(+Losses)", 95.6, 86.8, 2560, 224, 138},
        {"HENet(+Both)", 96.0, 87.2, 2560, 224, 138},
    };
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

TEST_CASE("reference selection: largest model and lowest metric") {
    const auto models = published_profiles();
    const auto [m1_r1, m2_r1] = select_references(models, EsMetric::r1);
    CHECK(models[m1_r1].name == "HPM");          // 356 MB
    CHECK(models[m2_r1].name == "AlignedReID");  // 91.8 R1
    const auto [m1_map, m2_map] = select_references(models, EsMetric::map);
    CHECK(models[m1_map].name == "HPM");
    CHECK(models[m2_map].name == "AlignedReID");  // 79.3 mAP
}

TEST_CASE("reference ties go to the first listed model") {
    const std::vector<ModelProfile> models{
        {"first", 90.0, 80.0, 1000, 200, 100},
        {"second", 90.0, 80.0, 1000, 200, 100},
    };
    const auto [m1, m2] = select_references(models, EsMetric::r1);
    CHECK(m1 == 0);
    CHECK(m2 == 0);
}

TEST_CASE("fewer than two models cannot be compared") {
    const std::vector<ModelProfile> one{{"only", 90.0, 80.0, 1000, 200, 100}};
    CHECK_THROWS_AS(select_references(one, EsMetric::r1), std::invalid_argument);
    CHECK_THROWS_AS(es_table(one), std::invalid_argument);
    CHECK_THROWS_AS(select_references(std::vector<ModelProfile>{}, EsMetric::r1),
                    std::invalid_argument);
}

TEST_CASE("the largest model scores exactly 1") {
    const auto models = published_profiles();
    const auto [m1, m2] = select_references(models, EsMetric::r1);
    CHECK(score(models[m1], models[m1], models[m2], EsMetric::r1) == 1.0);
    CHECK(efficiency_score(models[m1], models) == 1.0);
}

TEST_CASE("single-metric scores reproduce the hand-computed values") {
    const auto models = published_profiles();
    const auto [m1, m2] = select_references(models, EsMetric::r1);
    const auto [m1m, m2m] = select_references(models, EsMetric::map);
    CHECK(score(models[0], models[m1], models[m2], EsMetric::r1) ==
          doctest::Approx(2.664).epsilon(1e-3));
    CHECK(score(models[0], models[m1m], models[m2m], EsMetric::map) ==
          doctest::Approx(2.432).epsilon(1e-3));
}

TEST_CASE("the full table reproduces the published ES column") {
    const std::vector<double> expected{2.55, 3.45, 1.00, 2.42, 2.76, 3.08, 3.41, 3.52};
    const auto rows = es_table(published_profiles());
    REQUIRE(rows.size() == expected.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        INFO(rows[i].name);
        CHECK(std::abs(round2(rows[i].es) - expected[i]) <= 0.01 + 1e-12);
    }
}

TEST_CASE("lambda 0 collapses ES onto the R1 score") {
    const auto models = published_profiles();
    EsConfig cfg;
    cfg.lambda = 0.0;
    const auto rows = es_table(models, cfg);
    for (const EsRow& row : rows) CHECK(row.es == row.score_r1);
}

TEST_CASE("common rescaling of v, s, or fd leaves scores unchanged") {
    const auto models = published_profiles();
    const auto baseline = es_table(models);
    for (int attribute = 0; attribute < 3; ++attribute) {
        auto scaled = models;
        for (ModelProfile& m : scaled) {
            if (attribute == 0) m.v *= 3.7;
            if (attribute == 1) m.s *= 0.25;
            if (attribute == 2) m.fd *= 12.0;
        }
        const auto rows = es_table(scaled);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].es == doctest::Approx(baseline[i].es).epsilon(1e-12));
        }
    }
}

TEST_CASE("ES rises with speed and falls with feature dim") {
    auto models = published_profiles();
    const double base = efficiency_score(models[4], models);

    auto faster = models;
    faster[4].s *= 1.1;
    CHECK(efficiency_score(faster[4], faster) > base);

    auto wider = models;
    wider[4].fd *= 1.1;
    CHECK(efficiency_score(wider[4], wider) < base);
}

TEST_CASE("duplicate names are rejected") {
    auto models = published_profiles();
    models[1].name = "AlignedReID";
    CHECK_THROWS_AS(es_table(models), std::invalid_argument);
}

TEST_CASE("profile validation") {
    ModelProfile bad{"x", 0.0, 80.0, 1000, 100, 100};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {"x", 101.0, 80.0, 1000, 100, 100};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {"x", 90.0, 80.0, -5, 100, 100};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {"", 90.0, 80.0, 1000, 100, 100};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("degenerate thr is caught") {
    // thr must be positive by config validation; a crafted reference with a
    // hugely better M2 can still zero the reference margin.
    const std::vector<ModelProfile> models{
        {"tiny-thr-victim", 50.0, 50.0, 1000, 100, 100},
        {"reference", 10.0, 10.0, 1000, 200, 100},
    };
    EsConfig cfg;
    cfg.thr = -1.0;
    CHECK_THROWS_AS(es_table(models, cfg), std::invalid_argument);
}

TEST_CASE("ES increasing-in-speed is monotone across a sweep") {
    auto models = published_profiles();
    double prev = 0.0;
    for (double mult = 1.0; mult < 2.01; mult += 0.25) {
        auto tweaked = models;
        tweaked[5].s = models[5].s * mult;
        const double es = efficiency_score(tweaked[5], tweaked);
        CHECK(es > prev);
        prev = es;
    }
}
