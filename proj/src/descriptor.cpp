#include "reidkit/descriptor.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace reidkit {

int branch_dim(BranchId id) {
    switch (id) {
        case BranchId::G1:
        case BranchId::G4:
        case BranchId::R:
            return 512;
        default:
            return 256;
    }
}

std::string_view branch_name(BranchId id) {
    switch (id) {
        case BranchId::G1: return "G1";
        case BranchId::G4: return "G4";
        case BranchId::P4_1: return "P4_1";
        case BranchId::P4_2: return "P4_2";
        case BranchId::P4_3: return "P4_3";
        case BranchId::P4_4: return "P4_4";
        case BranchId::R: return "R";
    }
    return "?";
}

std::optional<BranchId> branch_from_name(std::string_view name) {
    for (BranchId id : kAllBranches) {
        if (branch_name(id) == name) return id;
    }
    return std::nullopt;
}

std::vector<double> compose_descriptor(
    std::vector<std::pair<BranchId, std::vector<double>>> parts) {
    if (parts.empty()) throw std::invalid_argument("compose_descriptor: no branches");
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0 && parts[i].first == parts[i - 1].first) {
            throw std::invalid_argument("compose_descriptor: duplicate branch");
        }
        const auto& [id, values] = parts[i];
        if (static_cast<int>(values.size()) != branch_dim(id)) {
            throw std::invalid_argument("compose_descriptor: branch dimension mismatch");
        }
        out.insert(out.end(), values.begin(), values.end());
    }
    return out;
}

std::vector<std::pair<BranchId, std::vector<double>>> split_descriptor(
    std::span<const double> descriptor, std::span<const BranchId> layout) {
    std::size_t total = 0;
    for (BranchId id : layout) total += static_cast<std::size_t>(branch_dim(id));
    if (descriptor.size() != total) {
        throw std::invalid_argument("split_descriptor: descriptor length mismatch");
    }
    std::vector<std::pair<BranchId, std::vector<double>>> parts;
    std::size_t offset = 0;
    for (BranchId id : layout) {
        const std::size_t d = static_cast<std::size_t>(branch_dim(id));
        parts.emplace_back(id,
                           std::vector<double>(descriptor.begin() + offset,
                                               descriptor.begin() + offset + d));
        offset += d;
    }
    return parts;
}

std::vector<double> l2_normalize(std::span<const double> v) {
    const double norm = l2_norm(v);
    if (!(norm > 0.0)) throw std::invalid_argument("l2_normalize: zero vector");
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out) x /= norm;
    return out;
}

void FeatureSet::validate() const {
    if (values.rows < 1) throw std::invalid_argument("FeatureSet: empty");
    if (static_cast<int>(person_ids.size()) != values.rows ||
        static_cast<int>(camera_ids.size()) != values.rows) {
        throw std::invalid_argument("FeatureSet: id column size mismatch");
    }
    if (!all_finite(values.v)) throw std::invalid_argument("FeatureSet: non-finite values");
    if (!layout.empty()) {
        int total = 0;
        for (BranchId id : layout) total += branch_dim(id);
        if (total != values.cols) throw std::invalid_argument("FeatureSet: layout dim mismatch");
    }
}

namespace {

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) return 1.0;  // similarity defined as 0
    return 1.0 - dot(a, b) / (na * nb);
}

}  // namespace

Mat distance_matrix(const FeatureSet& queries, const FeatureSet& gallery, Metric metric,
                    int jobs) {
    if (queries.dim() != gallery.dim()) {
        throw std::invalid_argument("distance_matrix: dimension mismatch");
    }
    const int nq = queries.size(), ng = gallery.size();
    Mat out(nq, ng);

    const auto fill_rows = [&](int row_begin, int row_end) {
        for (int i = row_begin; i < row_end; ++i) {
            const auto q = queries.values.row(i);
            for (int j = 0; j < ng; ++j) {
                const auto g = gallery.values.row(j);
                out(i, j) = metric == Metric::euclidean ? euclidean_distance(q, g)
                                                        : cosine_distance(q, g);
            }
        }
    };

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp(jobs, 1, std::max(1, nq));
    if (jobs == 1) {
        fill_rows(0, nq);
        return out;
    }
    std::vector<std::thread> workers;
    const int chunk = (nq + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
        const int begin = w * chunk;
        const int end = std::min(nq, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back(fill_rows, begin, end);
    }
    for (std::thread& t : workers) t.join();
    return out;
}

}  // namespace reidkit
