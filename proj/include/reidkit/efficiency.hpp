#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace reidkit {

// Published profile of one model: retrieval accuracy plus efficiency
// attributes (feature dim, size in MB, forward speed in FPS).
struct ModelProfile {
    std::string name;
    double r1 = 0.0;   // percent, (0, 100]
    double map = 0.0;  // percent, (0, 100]
    double fd = 0.0;   // feature dimension
    double v = 0.0;    // model size, MB
    double s = 0.0;    // forward speed, FPS

    void validate() const;
};

struct EsConfig {
    double thr = 30.0;    // metric threshold
    double lambda = 1.0;  // weight of the mAP score term

    void validate() const;
};

enum class EsMetric { r1, map };

/// Reference models among the supplied set: first index is the largest model
/// (max v), second the least accurate under `metric` (min r1 or min map).
/// Ties go to the first listed. Throws unless at least two models are given.
std::pair<std::size_t, std::size_t> select_references(std::span<const ModelProfile> models,
                                                      EsMetric metric);

/// Single-metric score: f(candidate) / f(reference_m1) with
/// f(m) = v * s^2 * (metric - metric(m2) + thr)^3 / fd.
double score(const ModelProfile& candidate, const ModelProfile& m1, const ModelProfile& m2,
             EsMetric metric, const EsConfig& cfg = {});

/// Combined score (score_r1 + lambda * score_map) / (1 + lambda), with
/// references chosen per metric from `models`.
double efficiency_score(const ModelProfile& candidate, std::span<const ModelProfile> models,
                        const EsConfig& cfg = {});

struct EsRow {
    std::string name;
    double score_r1 = 0.0;
    double score_map = 0.0;
    double es = 0.0;
};

/// Scores every model against the set itself. Throws on duplicate names.
std::vector<EsRow> es_table(std::span<const ModelProfile> models, const EsConfig& cfg = {});

}  // namespace reidkit
