#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace reidkit {

// Result of checking one loss's analytic gradient against central finite
// differences. Relative error per coordinate is |a - n| / max(1, |a| + |n|);
// the floor keeps exactly-zero coordinates (inactive hinges) from turning
// finite-difference noise into spurious failures.
struct GradCheckReport {
    std::string loss;
    double max_rel_err = 0.0;
    double mean_rel_err = 0.0;
    long points_checked = 0;
    std::uint64_t seed = 0;
    int worst_trial = -1;
    int worst_coordinate = -1;
};

double gradcheck_relative_error(double analytic, double numeric);

/// Central difference (f(x+h) - f(x-h)) / 2h for a scalar functional, where
/// `x` aliases the coordinate inside the state `f` evaluates.
double central_difference(const std::function<double()>& f, double& x, double h = 1e-5);

GradCheckReport gradcheck_ce(std::uint64_t seed, int trials, double step = 1e-5);
/// Triplet instances are resampled until hardest-positive/negative choices
/// and the hinge sit well away from ties and kinks, so the loss is smooth in
/// the checked neighborhood.
GradCheckReport gradcheck_triplet(std::uint64_t seed, int trials, double step = 1e-5);
GradCheckReport gradcheck_oim(std::uint64_t seed, int trials, double step = 1e-5);
GradCheckReport gradcheck_mse(std::uint64_t seed, int trials, double step = 1e-5);

std::vector<GradCheckReport> gradcheck_all(std::uint64_t seed, int trials, double step = 1e-5);

}  // namespace reidkit
