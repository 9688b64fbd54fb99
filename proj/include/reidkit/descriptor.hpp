#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "reidkit/matrix.hpp"

namespace reidkit {

// Feature branches in canonical concatenation order. G1/G4/R are 512-d,
// each P4_j is 256-d; the base layout (no R) totals 2048, the full one 2560.
enum class BranchId : std::uint8_t { G1, G4, P4_1, P4_2, P4_3, P4_4, R };

inline constexpr BranchId kAllBranches[] = {BranchId::G1,   BranchId::G4,   BranchId::P4_1,
                                            BranchId::P4_2, BranchId::P4_3, BranchId::P4_4,
                                            BranchId::R};

int branch_dim(BranchId id);
std::string_view branch_name(BranchId id);
std::optional<BranchId> branch_from_name(std::string_view name);

/// Concatenates branch vectors in canonical order (inputs may arrive in any
/// order). Throws on a duplicated branch or a length that does not match the
/// branch's dimension.
std::vector<double> compose_descriptor(
    std::vector<std::pair<BranchId, std::vector<double>>> parts);

/// Inverse of compose_descriptor for a known layout (given in canonical
/// order).
std::vector<std::pair<BranchId, std::vector<double>>> split_descriptor(
    std::span<const double> descriptor, std::span<const BranchId> layout);

/// Scales to unit L2 norm; throws std::invalid_argument on a zero vector.
std::vector<double> l2_normalize(std::span<const double> v);

// Embedding rows with per-row person and camera ids. `layout` optionally
// records the branch composition of each row.
struct FeatureSet {
    Mat values;  // N x D
    std::vector<int> person_ids;
    std::vector<int> camera_ids;
    std::vector<BranchId> layout;
    std::uint32_t flags = 0;

    int size() const { return values.rows; }
    int dim() const { return values.cols; }
    void validate() const;
};

enum class Metric { euclidean, cosine };

/// Nq x Ng distances: non-squared Euclidean, or 1 - cosine similarity (rows
/// of zero norm get similarity 0). Work is split across `jobs` threads
/// (0 = hardware concurrency); each element is accumulated exactly as a
/// naive loop would, so results are independent of the partitioning.
Mat distance_matrix(const FeatureSet& queries, const FeatureSet& gallery, Metric metric,
                    int jobs = 0);

}  // namespace reidkit
