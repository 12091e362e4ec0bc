#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nrmlab/arrivals.hpp"
#include "nrmlab/errors.hpp"
#include "nrmlab/instance.hpp"
#include "nrmlab/lp.hpp"

namespace nrmlab {

/// Clairvoyant benchmark for one realized path: the best attainable revenue
/// when all arrival counts are known in advance,
///
///     maximize  r . z   s.t.  A z <= C,  0 <= z_j <= (arrivals of class j)
///
/// solved as a continuous LP.  Its value dominates every admission policy
/// on the same path.
struct HindsightResult {
    double value = 0.0;
    std::vector<double> z;
};
HindsightResult hindsight_optimum(const Instance& inst, const ArrivalPath& path);

/// The LP fed to the solver by hindsight_optimum, exposed for testing.
LpProblem hindsight_problem(const Instance& inst, const ArrivalPath& path);

/// Monte-Carlo estimate of the expected hindsight optimum over fresh paths.
struct MonteCarloEstimate {
    double mean = 0.0;
    double se = 0.0;       ///< standard error of the mean
    double ci_half = 0.0;  ///< 1.96 * se (normal-approximation 95% CI)
    std::size_t n = 0;
};
/// Requires at least two seeds.
MonteCarloEstimate estimate_v_ho(const Instance& inst, std::span<const std::uint64_t> seeds);

/// Exact expected optimum for a single class consuming one unit of a single
/// resource: revenue * E[min(N, capacity)] with N ~ Poisson(lambda * horizon),
/// computed by direct probability summation with the tail truncated once the
/// remaining CDF mass is below 1e-12.  Throws ParameterOutOfRange for
/// lambda <= 0, revenue <= 0, capacity < 0 or horizon < 0.
double single_class_exact_optimum(double lambda, double revenue, double capacity,
                                  double horizon);

}  // namespace nrmlab
