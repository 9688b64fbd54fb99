#include "reidkit/retrieval.hpp"

#include <algorithm>
#include <numeric>

namespace reidkit {

std::vector<GalleryStatus> protocol_filter(int query_pid, int query_cam,
                                           const FeatureSet& gallery) {
    std::vector<GalleryStatus> status(static_cast<std::size_t>(gallery.size()));
    for (int j = 0; j < gallery.size(); ++j) {
        if (gallery.person_ids[j] == -1) {
            status[j] = GalleryStatus::junk;
        } else if (gallery.person_ids[j] == query_pid && gallery.camera_ids[j] == query_cam) {
            status[j] = GalleryStatus::excluded_same_cam;
        } else {
            status[j] = GalleryStatus::valid;
        }
    }
    return status;
}

RankingResult evaluate(const FeatureSet& queries, const FeatureSet& gallery, Metric metric,
                       int jobs) {
    queries.validate();
    gallery.validate();
    const Mat dist = distance_matrix(queries, gallery, metric, jobs);
    const int nq = queries.size(), ng = gallery.size();

    // Deterministic canonical gallery order; distance ties then resolve by
    // (person_id, camera_id, original index), making the metrics invariant
    // under gallery row permutations.
    std::vector<int> canonical(static_cast<std::size_t>(ng));
    std::iota(canonical.begin(), canonical.end(), 0);
    std::sort(canonical.begin(), canonical.end(), [&](int a, int b) {
        return std::tuple(gallery.person_ids[a], gallery.camera_ids[a], a) <
               std::tuple(gallery.person_ids[b], gallery.camera_ids[b], b);
    });

    RankingResult result;
    result.per_query.resize(static_cast<std::size_t>(nq));
    result.cmc.assign(static_cast<std::size_t>(ng), 0.0);

    for (int qi = 0; qi < nq; ++qi) {
        QueryEval& qe = result.per_query[qi];
        qe.ranking = canonical;
        std::stable_sort(qe.ranking.begin(), qe.ranking.end(),
                         [&](int a, int b) { return dist(qi, a) < dist(qi, b); });

        const auto status =
            protocol_filter(queries.person_ids[qi], queries.camera_ids[qi], gallery);
        qe.valid.resize(qe.ranking.size());

        int valid_rank = 0;
        int hits = 0;
        double precision_sum = 0.0;
        for (std::size_t pos = 0; pos < qe.ranking.size(); ++pos) {
            const int g = qe.ranking[pos];
            qe.valid[pos] = status[g] == GalleryStatus::valid ? 1 : 0;
            if (!qe.valid[pos]) continue;
            ++valid_rank;
            if (gallery.person_ids[g] == queries.person_ids[qi]) {
                ++hits;
                precision_sum += static_cast<double>(hits) / valid_rank;
                if (qe.first_match_rank == 0) qe.first_match_rank = valid_rank;
            }
        }
        qe.num_relevant = hits;
        if (qe.num_relevant > 0) {
            qe.ap = precision_sum / qe.num_relevant;
            ++result.scored_queries;
            result.map += qe.ap;
            for (int k = qe.first_match_rank; k <= ng; ++k) result.cmc[k - 1] += 1.0;
        }
    }

    if (result.scored_queries == 0) {
        throw NoValidQuery("evaluate: every query was filtered out");
    }
    result.map /= result.scored_queries;
    for (double& c : result.cmc) c /= result.scored_queries;
    return result;
}

}  // namespace reidkit
