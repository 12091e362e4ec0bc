#include "nrmlab/oracle.hpp"

#include <cmath>

namespace nrmlab {

LpProblem hindsight_problem(const Instance& inst, const ArrivalPath& path) {
    if (path.num_classes() != inst.num_classes())
        throw Error(Errc::InvalidArgument,
                    "path has " + std::to_string(path.num_classes()) +
                        " classes, instance has " + std::to_string(inst.num_classes()));
    if (path.horizon != inst.horizon)
        throw Error(Errc::InvalidArgument, "path horizon differs from instance horizon");
    LpProblem p;
    p.objective = inst.revenue;
    p.rows = inst.bom;
    p.rhs = inst.capacity;
    p.upper.resize(inst.num_classes());
    for (std::size_t j = 0; j < inst.num_classes(); ++j)
        p.upper[j] = static_cast<double>(path.events[j].size());
    return p;
}

HindsightResult hindsight_optimum(const Instance& inst, const ArrivalPath& path) {
    const LpSolution sol = solve_bounded_lp(hindsight_problem(inst, path));
    return HindsightResult{sol.objective_value, sol.x};
}

MonteCarloEstimate estimate_v_ho(const Instance& inst, std::span<const std::uint64_t> seeds) {
    if (seeds.size() < 2)
        throw Error(Errc::InvalidArgument, "need at least two seeds for an estimate");
    std::vector<double> values;
    values.reserve(seeds.size());
    for (std::uint64_t seed : seeds)
        values.push_back(hindsight_optimum(inst, sample_path(inst, seed)).value);

    MonteCarloEstimate est;
    est.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    est.mean = sum / static_cast<double>(est.n);
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double var = ss / static_cast<double>(est.n - 1);
    est.se = std::sqrt(var / static_cast<double>(est.n));
    est.ci_half = 1.96 * est.se;
    return est;
}

double single_class_exact_optimum(double lambda, double revenue, double capacity,
                                  double horizon) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(Errc::ParameterOutOfRange, "lambda must be positive");
    if (!(revenue > 0.0) || !std::isfinite(revenue))
        throw Error(Errc::ParameterOutOfRange, "revenue must be positive");
    if (!(capacity >= 0.0))
        throw Error(Errc::ParameterOutOfRange, "capacity must be nonnegative");
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
        throw Error(Errc::ParameterOutOfRange, "horizon must be nonnegative");

    const double mu = lambda * horizon;
    if (mu == 0.0 || capacity == 0.0) return 0.0;

    const double log_mu = std::log(mu);
    const auto pmf = [&](double k) {
        return std::exp(-mu + k * log_mu - std::lgamma(k + 1.0));
    };

    // E[min(N, C)] via whichever one-sided expectation has the shorter sum;
    // the tail beyond mu + 12 sqrt(mu) carries less than 1e-12 of the mass.
    double expected;
    if (capacity <= mu) {
        // C - E[(C - N)^+], summed over k < C
        double deficit = 0.0;
        for (double k = 0.0; k < capacity; k += 1.0)
            deficit += (capacity - k) * pmf(k);
        expected = capacity - deficit;
    } else {
        // mu - E[(N - C)^+], summed over k >= C up to the tail cutoff
        const double k_max = mu + 12.0 * std::sqrt(mu) + 60.0;
        double excess = 0.0;
        for (double k = std::ceil(capacity); k <= k_max; k += 1.0)
            excess += (k - capacity) * pmf(k);
        expected = mu - excess;
    }
    return revenue * expected;
}

}  // namespace nrmlab
