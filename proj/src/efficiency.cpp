#include "reidkit/efficiency.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace reidkit {

void ModelProfile::validate() const {
    if (name.empty()) throw std::invalid_argument("ModelProfile: empty name");
    const bool positive = r1 > 0.0 && map > 0.0 && fd > 0.0 && v > 0.0 && s > 0.0;
    if (!positive || r1 > 100.0 || map > 100.0) {
        throw std::invalid_argument("ModelProfile '" + name + "': attributes out of range");
    }
}

void EsConfig::validate() const {
    if (!(thr > 0.0)) throw std::invalid_argument("EsConfig: thr must be > 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("EsConfig: lambda must be >= 0");
}

namespace {

double metric_of(const ModelProfile& m, EsMetric metric) {
    return metric == EsMetric::r1 ? m.r1 : m.map;
}

double score_numerator(const ModelProfile& m, const ModelProfile& m2, EsMetric metric,
                       const EsConfig& cfg) {
    const double margin = metric_of(m, metric) - metric_of(m2, metric) + cfg.thr;
    return m.v * m.s * m.s * margin * margin * margin / m.fd;
}

}  // namespace

std::pair<std::size_t, std::size_t> select_references(std::span<const ModelProfile> models,
                                                      EsMetric metric) {
    if (models.size() < 2) {
        throw std::invalid_argument("select_references: need at least two models to compare");
    }
    for (const ModelProfile& m : models) m.validate();

    std::size_t m1 = 0, m2 = 0;
    for (std::size_t i = 1; i < models.size(); ++i) {
        if (models[i].v > models[m1].v) m1 = i;  // strict: first listed wins ties
        if (metric_of(models[i], metric) < metric_of(models[m2], metric)) m2 = i;
    }
    return {m1, m2};
}

double score(const ModelProfile& candidate, const ModelProfile& m1, const ModelProfile& m2,
             EsMetric metric, const EsConfig& cfg) {
    cfg.validate();
    candidate.validate();
    const double denom = score_numerator(m1, m2, metric, cfg);
    if (!(denom > 0.0)) {
        throw std::domain_error("score: non-positive reference term (degenerate thr)");
    }
    return score_numerator(candidate, m2, metric, cfg) / denom;
}

double efficiency_score(const ModelProfile& candidate, std::span<const ModelProfile> models,
                        const EsConfig& cfg) {
    cfg.validate();
    const auto [r1_m1, r1_m2] = select_references(models, EsMetric::r1);
    const auto [map_m1, map_m2] = select_references(models, EsMetric::map);
    const double score_r1 = score(candidate, models[r1_m1], models[r1_m2], EsMetric::r1, cfg);
    const double score_map = score(candidate, models[map_m1], models[map_m2], EsMetric::map, cfg);
    return (score_r1 + cfg.lambda * score_map) / (1.0 + cfg.lambda);
}

std::vector<EsRow> es_table(std::span<const ModelProfile> models, const EsConfig& cfg) {
    cfg.validate();
    std::set<std::string> names;
    for (const ModelProfile& m : models) {
        if (!names.insert(m.name).second) {
            throw std::invalid_argument("es_table: duplicate model name '" + m.name + "'");
        }
    }
    const auto [r1_m1, r1_m2] = select_references(models, EsMetric::r1);
    const auto [map_m1, map_m2] = select_references(models, EsMetric::map);

    std::vector<EsRow> rows;
    rows.reserve(models.size());
    for (const ModelProfile& m : models) {
        EsRow row;
        row.name = m.name;
        row.score_r1 = score(m, models[r1_m1], models[r1_m2], EsMetric::r1, cfg);
        row.score_map = score(m, models[map_m1], models[map_m2], EsMetric::map, cfg);
        row.es = (row.score_r1 + cfg.lambda * row.score_map) / (1.0 + cfg.lambda);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace reidkit
