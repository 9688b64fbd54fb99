#include "reidkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace reidkit {

void EmbeddingBatch::validate() const {
    if (values.rows < 1) throw std::invalid_argument("EmbeddingBatch: empty batch");
    if (static_cast<int>(labels.size()) != values.rows) {
        throw std::invalid_argument("EmbeddingBatch: labels/values size mismatch");
    }
    if (!all_finite(values.v)) throw std::invalid_argument("EmbeddingBatch: non-finite values");
}

void TripletConfig::validate() const {
    if (!(margin >= 0.0)) throw std::invalid_argument("TripletConfig: margin must be >= 0");
}

void OimConfig::validate() const {
    if (!(temperature > 0.0)) throw std::invalid_argument("OimConfig: temperature must be > 0");
    if (!(momentum >= 0.0 && momentum <= 1.0)) {
        throw std::invalid_argument("OimConfig: momentum must be in [0,1]");
    }
    if (queue_capacity < 0) throw std::invalid_argument("OimConfig: negative queue capacity");
}

namespace {

double reduction_scale(Reduction reduction, int n) {
    return reduction == Reduction::mean ? 1.0 / static_cast<double>(n) : 1.0;
}

double reduce(const std::vector<double>& terms, Reduction reduction) {
    double sum = 0.0;
    for (double t : terms) sum += t;
    return reduction == Reduction::mean ? sum / static_cast<double>(terms.size()) : sum;
}

}  // namespace

LossReport ce_loss(const EmbeddingBatch& batch, const Mat& weights, Reduction reduction) {
    batch.validate();
    const int n = batch.size(), d = batch.dim(), c = weights.rows;
    if (weights.cols != d) throw std::invalid_argument("ce_loss: weight/feature dim mismatch");
    if (c < 2) throw std::invalid_argument("ce_loss: need at least 2 classes");
    for (int label : batch.labels) {
        if (label < 0 || label >= c) throw std::invalid_argument("ce_loss: label out of range");
    }

    LossReport report;
    report.reduction = reduction;
    report.per_sample.resize(n);
    report.grad_features = Mat(n, d);
    report.grad_weights = Mat(c, d);
    const double scale = reduction_scale(reduction, n);

    std::vector<double> logits(c);
    for (int i = 0; i < n; ++i) {
        const auto f = batch.values.row(i);
        double max_logit = -HUGE_VAL;
        for (int j = 0; j < c; ++j) {
            logits[j] = dot(weights.row(j), f);
            max_logit = std::max(max_logit, logits[j]);
        }
        double z = 0.0;
        for (int j = 0; j < c; ++j) z += std::exp(logits[j] - max_logit);
        const double lse = max_logit + std::log(z);
        report.per_sample[i] = lse - logits[batch.labels[i]];

        for (int j = 0; j < c; ++j) {
            const double p = std::exp(logits[j] - max_logit) / z;
            const double g = scale * (p - (j == batch.labels[i] ? 1.0 : 0.0));
            const auto wj = weights.row(j);
            for (int k = 0; k < d; ++k) {
                report.grad_features(i, k) += g * wj[k];
                report.grad_weights(j, k) += g * f[k];
            }
        }
    }
    report.value = reduce(report.per_sample, reduction);
    return report;
}

LossReport triplet_loss(const EmbeddingBatch& batch, const TripletConfig& cfg,
                        Reduction reduction) {
    batch.validate();
    cfg.validate();
    const int n = batch.size(), d = batch.dim();

    std::map<int, int> class_counts;
    for (int label : batch.labels) ++class_counts[label];
    if (class_counts.size() < 2) {
        throw std::invalid_argument("triplet_loss: need at least 2 classes in the batch");
    }
    const int k = class_counts.begin()->second;
    for (const auto& [label, count] : class_counts) {
        if (count != k) {
            throw std::invalid_argument("triplet_loss: batch is not P classes x K samples");
        }
    }

    Mat dist(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dij = euclidean_distance(batch.values.row(i), batch.values.row(j));
            dist(i, j) = dij;
            dist(j, i) = dij;
        }
    }

    LossReport report;
    report.reduction = reduction;
    report.per_sample.resize(n);
    report.grad_features = Mat(n, d);
    const double scale = reduction_scale(reduction, n);

    for (int a = 0; a < n; ++a) {
        int hardest_pos = a;  // self-distance 0 is a valid positive
        int hardest_neg = -1;
        for (int j = 0; j < n; ++j) {
            if (batch.labels[j] == batch.labels[a]) {
                if (dist(a, j) > dist(a, hardest_pos)) hardest_pos = j;
            } else if (hardest_neg < 0 || dist(a, j) < dist(a, hardest_neg)) {
                hardest_neg = j;
            }
        }
        const double dp = dist(a, hardest_pos);
        const double dn = dist(a, hardest_neg);
        const double hinge = cfg.margin + dp - dn;
        report.per_sample[a] = std::max(0.0, hinge);
        if (hinge <= 0.0) continue;

        const auto fa = batch.values.row(a);
        if (dp > 0.0) {
            const auto fp = batch.values.row(hardest_pos);
            for (int t = 0; t < d; ++t) {
                const double u = scale * (fa[t] - fp[t]) / dp;
                report.grad_features(a, t) += u;
                report.grad_features(hardest_pos, t) -= u;
            }
        }
        if (dn > 0.0) {
            const auto fn = batch.values.row(hardest_neg);
            for (int t = 0; t < d; ++t) {
                const double u = scale * (fa[t] - fn[t]) / dn;
                report.grad_features(a, t) -= u;
                report.grad_features(hardest_neg, t) += u;
            }
        }
    }
    report.value = reduce(report.per_sample, reduction);
    return report;
}

OimState::OimState(int num_classes, int dim, OimConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    if (num_classes < 1 || dim < 1) throw std::invalid_argument("OimState: bad shape");
    lut_ = Mat(num_classes, dim);  // zero rows until first update
}

void OimState::push_unlabeled(std::vector<double> feature) {
    if (static_cast<int>(feature.size()) != dim()) {
        throw std::invalid_argument("OimState: feature dim mismatch");
    }
    if (cfg_.queue_capacity == 0) return;
    if (static_cast<int>(queue_.size()) >= cfg_.queue_capacity) queue_.pop_front();
    queue_.push_back(std::move(feature));
}

void OimState::update_class(int label, std::span<const double> feat) {
    if (label < 0 || label >= num_classes()) throw std::invalid_argument("OimState: bad label");
    if (static_cast<int>(feat.size()) != dim()) {
        throw std::invalid_argument("OimState: feature dim mismatch");
    }
    auto row = lut_.row(label);
    for (int t = 0; t < dim(); ++t) {
        row[t] = cfg_.momentum * row[t] + (1.0 - cfg_.momentum) * feat[t];
    }
    const double norm = l2_norm(row);
    if (norm > 0.0) {
        for (double& x : row) x /= norm;
    }
}

namespace {

// Returns x / ||x||; a zero vector passes through unchanged.
std::vector<double> normalized_or_same(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    const double norm = l2_norm(x);
    if (norm > 0.0) {
        for (double& v : out) v /= norm;
    }
    return out;
}

}  // namespace

OimForward oim_forward(std::span<const double> x, int label, const OimState& state) {
    state.config().validate();
    const int p = state.num_classes(), d = state.dim();
    const int q = static_cast<int>(state.queue().size());
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("oim_forward: dim mismatch");
    if (!all_finite(x)) throw std::invalid_argument("oim_forward: non-finite input");
    if (label != kUnlabeled && (label < 0 || label >= p)) {
        throw std::invalid_argument("oim_forward: label out of range");
    }

    const bool normalize = state.config().normalize_inputs;
    const std::vector<double> xn =
        normalize ? normalized_or_same(x) : std::vector<double>(x.begin(), x.end());
    const double tau = state.config().temperature;

    std::vector<double> logits(static_cast<std::size_t>(p + q));
    for (int i = 0; i < p; ++i) logits[i] = dot(state.lut().row(i), xn) / tau;
    for (int j = 0; j < q; ++j) {
        logits[p + j] = dot(std::span<const double>(state.queue()[j]), xn) / tau;
    }

    double max_logit = -HUGE_VAL;
    for (double l : logits) max_logit = std::max(max_logit, l);
    double z = 0.0;
    for (double l : logits) z += std::exp(l - max_logit);

    OimForward fwd;
    fwd.class_probs.resize(p);
    fwd.queue_probs.resize(q);
    for (int i = 0; i < p; ++i) fwd.class_probs[i] = std::exp(logits[i] - max_logit) / z;
    for (int j = 0; j < q; ++j) fwd.queue_probs[j] = std::exp(logits[p + j] - max_logit) / z;
    fwd.grad_input.assign(d, 0.0);
    if (label == kUnlabeled) return fwd;

    fwd.loss = (max_logit + std::log(z)) - logits[label];

    // d loss / d xn = (sum_i p_i v_i + sum_k p_k u_k - v_label) / tau
    std::vector<double> grad_xn(d, 0.0);
    for (int i = 0; i < p; ++i) {
        const auto vi = state.lut().row(i);
        const double w = fwd.class_probs[i] - (i == label ? 1.0 : 0.0);
        for (int t = 0; t < d; ++t) grad_xn[t] += w * vi[t];
    }
    for (int j = 0; j < q; ++j) {
        const auto& uj = state.queue()[j];
        for (int t = 0; t < d; ++t) grad_xn[t] += fwd.queue_probs[j] * uj[t];
    }
    for (double& g : grad_xn) g /= tau;

    if (normalize) {
        const double norm = l2_norm(x);
        if (norm > 0.0) {
            // Chain through xn = x/||x||: (grad - xn (xn . grad)) / ||x||.
            const double proj = dot(std::span<const double>(xn), std::span<const double>(grad_xn));
            for (int t = 0; t < d; ++t) fwd.grad_input[t] = (grad_xn[t] - xn[t] * proj) / norm;
            return fwd;
        }
    }
    fwd.grad_input = std::move(grad_xn);
    return fwd;
}

LossReport oim_step(const Mat& features, const std::vector<int>& labels, OimState& state) {
    if (features.rows < 1) throw std::invalid_argument("oim_step: empty batch");
    if (static_cast<int>(labels.size()) != features.rows) {
        throw std::invalid_argument("oim_step: labels/values size mismatch");
    }

    const int n = features.rows, d = features.cols;
    LossReport report;
    report.reduction = Reduction::mean;
    report.per_sample.assign(n, 0.0);
    report.grad_features = Mat(n, d);

    int labeled = 0;
    std::vector<OimForward> forwards(n);
    for (int i = 0; i < n; ++i) {
        forwards[i] = oim_forward(features.row(i), labels[i], state);
        if (labels[i] != kUnlabeled) {
            report.per_sample[i] = forwards[i].loss;
            ++labeled;
        }
    }

    if (labeled > 0) {
        double sum = 0.0;
        for (double t : report.per_sample) sum += t;
        report.value = sum / labeled;
        for (int i = 0; i < n; ++i) {
            for (int t = 0; t < d; ++t) {
                report.grad_features(i, t) = forwards[i].grad_input[t] / labeled;
            }
        }
    }

    const bool normalize = state.config().normalize_inputs;
    for (int i = 0; i < n; ++i) {
        const auto row = features.row(i);
        const std::vector<double> feat =
            normalize ? normalized_or_same(row) : std::vector<double>(row.begin(), row.end());
        if (labels[i] == kUnlabeled) {
            state.push_unlabeled(feat);
        } else {
            state.update_class(labels[i], feat);
        }
    }
    return report;
}

LossReport mse_loss(const Mat& reconstructed, const Mat& target, Reduction reduction) {
    if (!reconstructed.same_shape(target)) throw std::invalid_argument("mse_loss: shape mismatch");
    if (reconstructed.v.empty()) throw std::invalid_argument("mse_loss: empty input");

    const std::size_t m = reconstructed.v.size();
    LossReport report;
    report.reduction = reduction;
    report.per_sample.resize(m);
    report.grad_features = Mat(reconstructed.rows, reconstructed.cols);
    const double scale = reduction == Reduction::mean ? 1.0 / static_cast<double>(m) : 1.0;

    for (std::size_t i = 0; i < m; ++i) {
        const double diff = reconstructed.v[i] - target.v[i];
        report.per_sample[i] = diff * diff;
        report.grad_features.v[i] = scale * 2.0 * diff;
    }
    report.value = reduce(report.per_sample, reduction);
    return report;
}

namespace {

BranchReport combine_shared_input(LossReport metric, LossReport ce, double wm, double wc) {
    BranchReport branch;
    branch.value = wm * metric.value + wc * ce.value;
    branch.grad_features = Mat(ce.grad_features.rows, ce.grad_features.cols);
    for (std::size_t i = 0; i < branch.grad_features.v.size(); ++i) {
        branch.grad_features.v[i] =
            wm * metric.grad_features.v[i] + wc * ce.grad_features.v[i];
    }
    branch.metric = std::move(metric);
    branch.ce = std::move(ce);
    return branch;
}

}  // namespace

BranchReport global_branch_loss(const EmbeddingBatch& batch, const Mat& weights,
                                const TripletConfig& cfg, double metric_weight,
                                double ce_weight) {
    return combine_shared_input(triplet_loss(batch, cfg), ce_loss(batch, weights), metric_weight,
                                ce_weight);
}

BranchReport partial_branch_loss(const EmbeddingBatch& batch, const Mat& weights, OimState& state,
                                 double metric_weight, double ce_weight) {
    return combine_shared_input(oim_step(batch.values, batch.labels, state),
                                ce_loss(batch, weights), metric_weight, ce_weight);
}

BranchReport recovery_branch_loss(const Mat& reconstructed, const Mat& target,
                                  const EmbeddingBatch& batch, const Mat& weights,
                                  double metric_weight, double ce_weight) {
    BranchReport branch;
    branch.metric = mse_loss(reconstructed, target);
    branch.ce = ce_loss(batch, weights);
    branch.value = metric_weight * branch.metric.value + ce_weight * branch.ce.value;
    branch.grad_features = Mat(branch.ce.grad_features.rows, branch.ce.grad_features.cols);
    for (std::size_t i = 0; i < branch.grad_features.v.size(); ++i) {
        branch.grad_features.v[i] = ce_weight * branch.ce.grad_features.v[i];
    }
    return branch;
}

}  // namespace reidkit
