#pragma once

#include <deque>
#include <vector>

#include "reidkit/matrix.hpp"

namespace reidkit {

enum class Reduction { sum, mean };

inline constexpr int kUnlabeled = -1;

// N x D feature rows with one integer label per row.
struct EmbeddingBatch {
    Mat values;               // N x D
    std::vector<int> labels;  // size N

    int size() const { return values.rows; }
    int dim() const { return values.cols; }
    void validate() const;  // shape agreement + finite values
};

// Loss value with per-sample terms and gradients. `value` equals the sum or
// the mean of per_sample according to `reduction` (OIM documents its own
// labeled-mean variant). grad_weights is filled by the CE loss only.
struct LossReport {
    double value = 0.0;
    std::vector<double> per_sample;
    Mat grad_features;
    Mat grad_weights;
    Reduction reduction = Reduction::sum;
};

/// Softmax cross entropy over class weights (C x D, no bias):
/// -sum_n log softmax(W f_n)[y_n], max-shifted for stability. Gradients are
/// produced for both the features and the weights.
LossReport ce_loss(const EmbeddingBatch& batch, const Mat& weights,
                   Reduction reduction = Reduction::sum);

struct TripletConfig {
    double margin = 0.3;
    void validate() const;
};

/// Batch-hard triplet loss over a P-class x K-sample batch with Euclidean
/// distances: per anchor, hinge on (margin + hardest positive - hardest
/// negative). Ties in the max/min go to the lowest index; inactive hinges
/// contribute zero (sub)gradient, as do zero-distance pairs.
LossReport triplet_loss(const EmbeddingBatch& batch, const TripletConfig& cfg = {},
                        Reduction reduction = Reduction::sum);

struct OimConfig {
    double temperature = 0.1;  // tau > 0; higher = softer distribution
    double momentum = 0.5;     // mu in [0,1]
    int queue_capacity = 32;   // Q
    bool normalize_inputs = true;

    void validate() const;
};

// Class lookup table (P x D, rows unit-norm after updates) plus a circular
// queue of up to Q unlabeled features. Single-writer: oim_step mutates;
// concurrent oim_forward against a frozen state is fine.
class OimState {
public:
    OimState(int num_classes, int dim, OimConfig cfg = {});

    int num_classes() const { return lut_.rows; }
    int dim() const { return lut_.cols; }
    const OimConfig& config() const { return cfg_; }

    Mat& lut() { return lut_; }
    const Mat& lut() const { return lut_; }
    const std::deque<std::vector<double>>& queue() const { return queue_; }

    void push_unlabeled(std::vector<double> feature);           // evicts the oldest at capacity
    void update_class(int label, std::span<const double> feat);  // momentum blend + renormalize

private:
    Mat lut_;
    std::deque<std::vector<double>> queue_;
    OimConfig cfg_;
};

struct OimForward {
    std::vector<double> class_probs;  // P entries
    std::vector<double> queue_probs;  // one per queue slot
    double loss = 0.0;                // -log p_label for labeled x, 0 otherwise
    std::vector<double> grad_input;   // d loss / d x (raw input), zeros when unlabeled
};

/// Non-parametric softmax over the lookup table and the unlabeled queue.
/// label == kUnlabeled contributes no loss. Does not mutate the state.
OimForward oim_forward(std::span<const double> x, int label, const OimState& state);

/// Forward + state update for a batch (labels may mix class ids and
/// kUnlabeled). Loss is the mean over labeled rows; per_sample holds each
/// row's contribution (0 for unlabeled). Gradients are taken w.r.t. the
/// input features only, against the state as of entry; afterwards labeled
/// rows update their LUT class and unlabeled rows enter the queue, in row
/// order.
LossReport oim_step(const Mat& features, const std::vector<int>& labels, OimState& state);

/// Sum of squared differences (mean optional); gradient 2(y_hat - y).
LossReport mse_loss(const Mat& reconstructed, const Mat& target,
                    Reduction reduction = Reduction::sum);

// Per-branch supervision: global = triplet + CE, partial = OIM + CE,
// recovery = MSE + CE. Values add with configurable weights (default 1).
struct BranchReport {
    double value = 0.0;
    LossReport metric;  // triplet / OIM / MSE part
    LossReport ce;
    Mat grad_features;  // combined where both parts share the input
};

BranchReport global_branch_loss(const EmbeddingBatch& batch, const Mat& weights,
                                const TripletConfig& cfg = {}, double metric_weight = 1.0,
                                double ce_weight = 1.0);
BranchReport partial_branch_loss(const EmbeddingBatch& batch, const Mat& weights, OimState& state,
                                 double metric_weight = 1.0, double ce_weight = 1.0);
/// Recovery gradients stay split: metric.grad_features is w.r.t. the
/// reconstruction, grad_features w.r.t. the classified features.
BranchReport recovery_branch_loss(const Mat& reconstructed, const Mat& target,
                                  const EmbeddingBatch& batch, const Mat& weights,
                                  double metric_weight = 1.0, double ce_weight = 1.0);

}  // namespace reidkit
