#pragma once

// Independent reference implementations used to cross-check the library.
// These deliberately avoid the library's computation paths: containment is
// tested per pixel without scanlines, distances come from plain loops,
// retrieval scoring enumerates ranks naively, and the triplet value is an
// exhaustive scan over anchors and candidates.

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>
#include <vector>

#include "reidkit/descriptor.hpp"
#include "reidkit/geometry.hpp"
#include "reidkit/losses.hpp"
#include "reidkit/retrieval.hpp"

namespace oracle {

inline bool point_in_hull(const std::vector<reidkit::Point>& hull, double px, double py) {
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const reidkit::Point& a = hull[i];
        const reidkit::Point& b = hull[(i + 1) % hull.size()];
        const double c = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
        if (c > 0) any_pos = true;
        if (c < 0) any_neg = true;
    }
    return !(any_pos && any_neg);
}

/// O(pixels x n) containment raster over an arbitrary pixel rectangle.
inline std::vector<std::uint8_t> raster_by_containment(const std::vector<reidkit::Point>& hull,
                                                       const reidkit::PixelBox& box) {
    std::vector<std::uint8_t> out(box.area(), 0);
    for (int y = box.y0; y <= box.y1; ++y) {
        for (int x = box.x0; x <= box.x1; ++x) {
            if (point_in_hull(hull, x + 0.5, y + 0.5)) {
                out[static_cast<std::size_t>(y - box.y0) * box.width() + (x - box.x0)] = 1;
            }
        }
    }
    return out;
}

inline reidkit::Mat distance_matrix(const reidkit::FeatureSet& queries,
                                    const reidkit::FeatureSet& gallery, reidkit::Metric metric) {
    reidkit::Mat out(queries.size(), gallery.size());
    for (int i = 0; i < queries.size(); ++i) {
        for (int j = 0; j < gallery.size(); ++j) {
            if (metric == reidkit::Metric::euclidean) {
                double acc = 0.0;
                for (int d = 0; d < queries.dim(); ++d) {
                    const double diff = queries.values(i, d) - gallery.values(j, d);
                    acc += diff * diff;
                }
                out(i, j) = std::sqrt(acc);
            } else {
                double dot = 0.0, nq = 0.0, ng = 0.0;
                for (int d = 0; d < queries.dim(); ++d) {
                    dot += queries.values(i, d) * gallery.values(j, d);
                    nq += queries.values(i, d) * queries.values(i, d);
                    ng += gallery.values(j, d) * gallery.values(j, d);
                }
                out(i, j) = (nq == 0.0 || ng == 0.0)
                                ? 1.0
                                : 1.0 - dot / (std::sqrt(nq) * std::sqrt(ng));
            }
        }
    }
    return out;
}

struct RankingScores {
    double map = 0.0;
    std::vector<double> cmc;  // cmc[k-1] = CMC@k
    int scored_queries = 0;
};

/// Naive protocol scorer: per query, sort all gallery entries by
/// (distance, person, camera, index), drop junk and same-person/same-camera
/// entries while walking, and accumulate non-interpolated AP plus the first
/// match rank.
inline RankingScores evaluate(const reidkit::FeatureSet& queries,
                              const reidkit::FeatureSet& gallery, reidkit::Metric metric) {
    const reidkit::Mat dist = oracle::distance_matrix(queries, gallery, metric);
    RankingScores scores;
    scores.cmc.assign(static_cast<std::size_t>(gallery.size()), 0.0);

    for (int qi = 0; qi < queries.size(); ++qi) {
        std::vector<std::tuple<double, int, int, int>> order;
        for (int j = 0; j < gallery.size(); ++j) {
            order.emplace_back(dist(qi, j), gallery.person_ids[j], gallery.camera_ids[j], j);
        }
        std::sort(order.begin(), order.end());

        int seen_valid = 0, hits = 0, first_match = 0;
        double precision_sum = 0.0;
        for (const auto& [d, pid, cam, j] : order) {
            if (pid == -1) continue;
            if (pid == queries.person_ids[qi] && cam == queries.camera_ids[qi]) continue;
            ++seen_valid;
            if (pid == queries.person_ids[qi]) {
                ++hits;
                precision_sum += static_cast<double>(hits) / seen_valid;
                if (first_match == 0) first_match = seen_valid;
            }
        }
        if (hits == 0) continue;
        ++scores.scored_queries;
        scores.map += precision_sum / hits;
        for (int k = first_match; k <= gallery.size(); ++k) scores.cmc[k - 1] += 1.0;
    }
    if (scores.scored_queries > 0) {
        scores.map /= scores.scored_queries;
        for (double& c : scores.cmc) c /= scores.scored_queries;
    }
    return scores;
}

/// Exhaustive batch-hard triplet value: scans every (anchor, positive,
/// negative) combination for the per-anchor max/min.
inline double triplet_value(const reidkit::EmbeddingBatch& batch, double margin) {
    const int n = batch.size();
    double total = 0.0;
    for (int a = 0; a < n; ++a) {
        double worst_pos = 0.0;  // self-distance
        double best_neg = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int d = 0; d < batch.dim(); ++d) {
                const double diff = batch.values(a, d) - batch.values(j, d);
                acc += diff * diff;
            }
            const double dist = std::sqrt(acc);
            if (batch.labels[j] == batch.labels[a]) {
                worst_pos = std::max(worst_pos, dist);
            } else {
                best_neg = std::min(best_neg, dist);
            }
        }
        total += std::max(0.0, margin + worst_pos - best_neg);
    }
    return total;
}

/// Plain central finite difference, independent of the library's checker.
inline double central_diff(const std::function<double()>& f, double& x, double h) {
    const double saved = x;
    x = saved + h;
    const double hi = f();
    x = saved - h;
    const double lo = f();
    x = saved;
    return (hi - lo) / (2.0 * h);
}

}  // namespace oracle
