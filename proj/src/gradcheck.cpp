#include "reidkit/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "reidkit/losses.hpp"
#include "reidkit/rng.hpp"

namespace reidkit {

double gradcheck_relative_error(double analytic, double numeric) {
    return std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic) + std::abs(numeric));
}

double central_difference(const std::function<double()>& f, double& x, double h) {
    const double saved = x;
    x = saved + h;
    const double hi = f();
    x = saved - h;
    const double lo = f();
    x = saved;
    return (hi - lo) / (2.0 * h);
}

namespace {

struct Accumulator {
    GradCheckReport report;
    int trial = 0;

    void add(double analytic, double numeric, int coordinate) {
        const double rel = gradcheck_relative_error(analytic, numeric);
        if (rel > report.max_rel_err) {
            report.max_rel_err = rel;
            report.worst_trial = trial;
            report.worst_coordinate = coordinate;
        }
        report.mean_rel_err += rel;
        ++report.points_checked;
    }
    void finish() {
        if (report.points_checked > 0) report.mean_rel_err /= report.points_checked;
    }
};

// Checks analytic gradient entries against central differences of `value`
// over every coordinate of `storage`.
void check_all_coordinates(Accumulator& acc, std::vector<double>& storage,
                           const std::vector<double>& analytic,
                           const std::function<double()>& value, double h) {
    for (std::size_t i = 0; i < storage.size(); ++i) {
        const double numeric = central_difference(value, storage[i], h);
        acc.add(analytic[i], numeric, static_cast<int>(i));
    }
}

double gaussian_like(RandomSource& rng) {
    // Sum of uniforms, centered; smooth spread is all the checks need.
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += rng.uniform(-1.0, 1.0);
    return acc * 0.5;
}

EmbeddingBatch random_pk_batch(RandomSource& rng, int p, int k, int d) {
    EmbeddingBatch batch;
    batch.values = Mat(p * k, d);
    for (double& x : batch.values.v) x = gaussian_like(rng);
    batch.labels.resize(static_cast<std::size_t>(p) * k);
    for (int i = 0; i < p * k; ++i) batch.labels[i] = i / k;
    return batch;
}

// Rejects instances whose batch-hard selections or hinge sit within
// `guard` of a tie or kink, where finite differences are invalid.
bool triplet_instance_is_smooth(const EmbeddingBatch& batch, double margin, double guard) {
    const int n = batch.size();
    Mat dist(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) dist(i, j) = euclidean_distance(batch.values.row(i), batch.values.row(j));
        }
    }
    for (int a = 0; a < n; ++a) {
        std::vector<double> pos, neg;
        for (int j = 0; j < n; ++j) {
            if (j == a) continue;
            if (batch.labels[j] == batch.labels[a]) {
                pos.push_back(dist(a, j));
            } else {
                neg.push_back(dist(a, j));
            }
        }
        std::sort(pos.begin(), pos.end());
        std::sort(neg.begin(), neg.end());
        const double dp = pos.back();
        const double dn = neg.front();
        if (pos.size() >= 2 && dp - pos[pos.size() - 2] < guard) return false;
        if (neg.size() >= 2 && neg[1] - dn < guard) return false;
        if (std::abs(margin + dp - dn) < guard) return false;    // hinge kink
        if (dp < 1e-3 || dn < 1e-3) return false;                // distance kink at 0
    }
    return true;
}

}  // namespace

GradCheckReport gradcheck_ce(std::uint64_t seed, int trials, double step) {
    Accumulator acc;
    acc.report.loss = "ce";
    acc.report.seed = seed;
    for (acc.trial = 0; acc.trial < trials; ++acc.trial) {
        Rng rng(seed + static_cast<std::uint64_t>(acc.trial));
        const int n = 4, d = 8, c = 5;
        EmbeddingBatch batch;
        batch.values = Mat(n, d);
        for (double& x : batch.values.v) x = gaussian_like(rng);
        batch.labels.resize(n);
        for (int& label : batch.labels) label = rng.uniform_int(0, c - 1);
        Mat weights(c, d);
        for (double& x : weights.v) x = gaussian_like(rng);

        const LossReport report = ce_loss(batch, weights);
        const auto value_f = [&] { return ce_loss(batch, weights).value; };
        check_all_coordinates(acc, batch.values.v, report.grad_features.v, value_f, step);
        check_all_coordinates(acc, weights.v, report.grad_weights.v, value_f, step);
    }
    acc.finish();
    return acc.report;
}

GradCheckReport gradcheck_triplet(std::uint64_t seed, int trials, double step) {
    Accumulator acc;
    acc.report.loss = "triplet";
    acc.report.seed = seed;
    const TripletConfig cfg;
    std::uint64_t instance_seed = seed;
    for (acc.trial = 0; acc.trial < trials; ++acc.trial) {
        EmbeddingBatch batch;
        do {
            Rng rng(instance_seed++);
            batch = random_pk_batch(rng, 4, 4, 8);
        } while (!triplet_instance_is_smooth(batch, cfg.margin, 100.0 * step));

        const LossReport report = triplet_loss(batch, cfg);
        const auto value_f = [&] { return triplet_loss(batch, cfg).value; };
        check_all_coordinates(acc, batch.values.v, report.grad_features.v, value_f, step);
    }
    acc.finish();
    return acc.report;
}

GradCheckReport gradcheck_oim(std::uint64_t seed, int trials, double step) {
    Accumulator acc;
    acc.report.loss = "oim";
    acc.report.seed = seed;
    for (acc.trial = 0; acc.trial < trials; ++acc.trial) {
        Rng rng(seed + static_cast<std::uint64_t>(acc.trial));
        const int p = 5, d = 8, q = 4;
        OimConfig cfg;
        OimState state(p, d, cfg);
        for (double& x : state.lut().v) x = gaussian_like(rng);
        for (int i = 0; i < p; ++i) {
            auto row = state.lut().row(i);
            const double norm = l2_norm(row);
            for (double& x : row) x /= norm;
        }
        for (int j = 0; j < q; ++j) {
            std::vector<double> u(d);
            for (double& x : u) x = gaussian_like(rng);
            const double norm = l2_norm(u);
            for (double& x : u) x /= norm;
            state.push_unlabeled(std::move(u));
        }

        std::vector<double> x(d);
        for (double& t : x) t = gaussian_like(rng);
        if (l2_norm(x) < 0.5) x[0] += 1.0;  // stay away from the normalization singularity
        const int label = rng.uniform_int(0, p - 1);

        const OimForward fwd = oim_forward(x, label, state);
        const auto value_f = [&] { return oim_forward(x, label, state).loss; };
        check_all_coordinates(acc, x, fwd.grad_input, value_f, step);
    }
    acc.finish();
    return acc.report;
}

GradCheckReport gradcheck_mse(std::uint64_t seed, int trials, double step) {
    Accumulator acc;
    acc.report.loss = "mse";
    acc.report.seed = seed;
    for (acc.trial = 0; acc.trial < trials; ++acc.trial) {
        Rng rng(seed + static_cast<std::uint64_t>(acc.trial));
        Mat recon(4, 4), target(4, 4);
        for (double& x : recon.v) x = gaussian_like(rng);
        for (double& x : target.v) x = gaussian_like(rng);

        const LossReport report = mse_loss(recon, target);
        const auto value_f = [&] { return mse_loss(recon, target).value; };
        check_all_coordinates(acc, recon.v, report.grad_features.v, value_f, step);
    }
    acc.finish();
    return acc.report;
}

std::vector<GradCheckReport> gradcheck_all(std::uint64_t seed, int trials, double step) {
    return {gradcheck_ce(seed, trials, step), gradcheck_triplet(seed, trials, step),
            gradcheck_oim(seed, trials, step), gradcheck_mse(seed, trials, step)};
}

}  // namespace reidkit
