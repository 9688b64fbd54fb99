#pragma once

#include <stdexcept>
#include <vector>

#include "reidkit/descriptor.hpp"

namespace reidkit {

struct NoValidQuery : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cross-camera protocol status of one gallery entry for a given query.
enum class GalleryStatus : std::uint8_t {
    valid,             // scored
    excluded_same_cam, // same person and same camera as the query: skipped
    junk,              // person_id == -1: skipped
};

std::vector<GalleryStatus> protocol_filter(int query_pid, int query_cam,
                                           const FeatureSet& gallery);

struct QueryEval {
    std::vector<int> ranking;         // gallery indices, best first (all entries)
    std::vector<std::uint8_t> valid;  // parallel to ranking; 1 = scored
    double ap = 0.0;
    int first_match_rank = 0;  // 1-based rank among valid entries; 0 = no match
    int num_relevant = 0;      // valid same-person entries in the gallery
};

struct RankingResult {
    std::vector<QueryEval> per_query;
    std::vector<double> cmc;  // cmc[k-1] = CMC@k, length = gallery size
    double map = 0.0;
    int scored_queries = 0;  // queries with at least one valid match
};

/// Ranks the gallery per query (ascending distance; ties resolved by a
/// deterministic pre-sort on (person_id, camera_id, index)), applies the
/// cross-camera junk protocol, and computes non-interpolated AP per query
/// plus the CMC curve. Queries with no valid match are dropped from both the
/// mAP and CMC denominators; if none remain, throws NoValidQuery.
RankingResult evaluate(const FeatureSet& queries, const FeatureSet& gallery, Metric metric,
                       int jobs = 1);

}  // namespace reidkit
