#include "nrmlab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nrmlab/detail/format.hpp"

namespace nrmlab {

const char* policy_name(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::Spa: return "SPA";
        case PolicyKind::Fr: return "FR";
        case PolicyKind::Ir: return "IR";
        case PolicyKind::Irt: return "IRT";
        case PolicyKind::Frt: return "FRT";
    }
    return "?";
}

std::optional<PolicyKind> policy_from_name(std::string_view name) noexcept {
    for (PolicyKind k : all_policy_kinds)
        if (name == policy_name(k)) return k;
    return std::nullopt;
}

ResolveSchedule compute_schedule(double horizon) {
    if (!(horizon > std::numbers::e))
        throw Error(Errc::HorizonTooShort,
                    "resolve schedule needs horizon > e, got " + std::to_string(horizon));
    ResolveSchedule s;
    s.horizon = horizon;
    const double loglog = std::log(std::log(horizon));
    s.K = static_cast<int>(std::ceil(loglog / std::log(6.0 / 5.0)));
    s.tau.resize(s.K + 1);
    s.start.resize(s.K + 1);
    s.threshold.resize(s.K);
    for (int u = 0; u <= s.K; ++u) {
        s.tau[u] = std::pow(horizon, std::pow(5.0 / 6.0, u));
        s.start[u] = horizon - s.tau[u];
        if (u < s.K) s.threshold[u] = std::pow(s.tau[u], -0.25);
    }
    return s;
}

double ratio_probability(double x, double lambda) noexcept {
    const double p = x / lambda;
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

double threshold_probability(double x, double lambda, double theta) noexcept {
    if (x < lambda * theta) return 0.0;
    if (x > lambda * (1.0 - theta)) return 1.0;
    return ratio_probability(x, lambda);
}

namespace {

void check_compatible(const Instance& inst, const ArrivalPath& path) {
    if (path.num_classes() != inst.num_classes())
        throw Error(Errc::InvalidArgument,
                    "path has " + std::to_string(path.num_classes()) +
                        " classes, instance has " + std::to_string(inst.num_classes()));
    if (path.horizon != inst.horizon)
        throw Error(Errc::InvalidArgument, "path horizon differs from instance horizon");
}

/// Shared admission mechanics: capacity bookkeeping, the per-arrival coin,
/// and the optional trace.  Exactly one uniform is drawn per event no
/// matter how the decision falls, so thinning streams stay aligned across
/// variants that prune with thresholds.
class Admission {
  public:
    Admission(const Instance& inst, SplitMix64& thin, const RunOptions& opts)
        : inst_(inst), thin_(thin), trace_(opts.trace) {
        result_.accepted.assign(inst.num_classes(), 0);
        result_.remaining = inst.capacity;
    }

    void handle(const MergedEvent& e, double prob) {
        const double coin = thin_.uniform01();
        const std::size_t j = e.cls;
        const bool fits = column_fits(j);
        Decision decision;
        if (!fits) {
            decision = Decision::RejectCapacity;
        } else if (coin < prob) {
            consume(j);
            ++result_.accepted[j];
            result_.revenue += inst_.revenue[j];
            decision = Decision::Accept;
        } else {
            decision = Decision::RejectCoin;
        }
        if (trace_)
            trace_->push_back({e.time, e.cls, decision, prob, result_.remaining});
    }

    RunResult&& take() { return std::move(result_); }
    const std::vector<double>& remaining() const { return result_.remaining; }
    void count_resolve() { ++result_.resolves; }

  private:
    bool column_fits(std::size_t j) const {
        for (std::size_t l = 0; l < inst_.num_resources(); ++l)
            if (inst_.bom(l, j) > result_.remaining[l]) return false;
        return true;
    }
    void consume(std::size_t j) {
        for (std::size_t l = 0; l < inst_.num_resources(); ++l)
            result_.remaining[l] -= inst_.bom(l, j);
    }

    const Instance& inst_;
    SplitMix64& thin_;
    std::vector<TraceRow>* trace_;
    RunResult result_;
};

/// LP scratch shared by one run: the rhs is rewritten before every solve,
/// everything else stays fixed.
struct Resolver {
    explicit Resolver(const Instance& inst) {
        problem.objective = inst.revenue;
        problem.rows = inst.bom;
        problem.upper = inst.arrival_rate;
        problem.rhs.assign(inst.num_resources(), 0.0);
    }

    /// Solve with rhs = remaining / denom; fill acceptance probabilities,
    /// thresholded when theta >= 0.
    void resolve(const Instance& inst, const std::vector<double>& remaining, double denom,
                 double theta, std::vector<double>& prob,
                 std::vector<std::vector<double>>* rhs_log) {
        for (std::size_t l = 0; l < remaining.size(); ++l)
            problem.rhs[l] = remaining[l] / denom;
        if (solver.solve(problem, solution) != LpStatus::Optimal)
            throw Error(Errc::NumericalFailure,
                        "simplex safeguard tripped after " +
                            std::to_string(solution.iterations) + " iterations");
        for (std::size_t j = 0; j < prob.size(); ++j) {
            const double x = solution.x[j];
            const double lambda = inst.arrival_rate[j];
            prob[j] = theta >= 0.0 ? threshold_probability(x, lambda, theta)
                                   : ratio_probability(x, lambda);
        }
        if (rhs_log) rhs_log->push_back(problem.rhs);
    }

    LpSolver solver;
    LpProblem problem;
    LpSolution solution;
};

/// Unit-period engine (Fr / Frt): re-solve at t = 0, 1, ... with
/// rhs = C(t) / (T - t); a non-integer horizon leaves a short final period.
/// Periods without arrivals are solved only when the rhs log is requested —
/// the solution of an event-free period is never consulted.
RunResult run_periodic(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                       bool thresholded, const RunOptions& opts) {
    check_compatible(inst, path);
    const double horizon = inst.horizon;
    const auto merged = merge_events(path);
    const std::size_t periods = static_cast<std::size_t>(std::ceil(horizon));

    Admission admission(inst, thin, opts);
    Resolver resolver(inst);
    std::vector<double> prob(inst.num_classes(), 0.0);

    std::size_t idx = 0;
    for (std::size_t t = 0; t < periods; ++t) {
        const bool last = t + 1 == periods;
        const double period_end = static_cast<double>(t) + 1.0;
        const bool has_event =
            idx < merged.size() && (last || merged[idx].time < period_end);
        if (has_event || opts.resolve_rhs) {
            const double to_go = horizon - static_cast<double>(t);
            const double theta = thresholded ? std::pow(to_go, -0.25) : -1.0;
            resolver.resolve(inst, admission.remaining(), to_go, theta, prob,
                             opts.resolve_rhs);
            admission.count_resolve();
        }
        while (idx < merged.size() && (last || merged[idx].time < period_end)) {
            admission.handle(merged[idx], prob[merged[idx].cls]);
            ++idx;
        }
    }
    return admission.take();
}

/// Doubly geometric engine (Ir / Irt): re-solve at each epoch start with
/// rhs = C(start_u) / tau_u; Irt rounds with theta_u except in the final
/// epoch.
RunResult run_scheduled(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                        const ResolveSchedule& schedule, bool thresholded,
                        const RunOptions& opts) {
    check_compatible(inst, path);
    if (schedule.horizon != inst.horizon)
        throw Error(Errc::InvalidArgument, "schedule horizon differs from instance horizon");
    const auto merged = merge_events(path);

    Admission admission(inst, thin, opts);
    Resolver resolver(inst);
    std::vector<double> prob(inst.num_classes(), 0.0);

    std::size_t idx = 0;
    for (int u = 0; u <= schedule.K; ++u) {
        const bool last = u == schedule.K;
        const double epoch_end = last ? inst.horizon : schedule.start[u + 1];
        const double theta = (thresholded && !last) ? schedule.threshold[u] : -1.0;
        resolver.resolve(inst, admission.remaining(), schedule.tau[u], theta, prob,
                         opts.resolve_rhs);
        admission.count_resolve();
        while (idx < merged.size() && (last || merged[idx].time < epoch_end)) {
            admission.handle(merged[idx], prob[merged[idx].cls]);
            ++idx;
        }
    }
    return admission.take();
}

}  // namespace

RunResult run_spa(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                  const RunOptions& opts) {
    check_compatible(inst, path);
    Admission admission(inst, thin, opts);
    Resolver resolver(inst);
    std::vector<double> prob(inst.num_classes(), 0.0);
    resolver.resolve(inst, inst.capacity, inst.horizon, -1.0, prob, opts.resolve_rhs);
    admission.count_resolve();
    for (const MergedEvent& e : merge_events(path)) admission.handle(e, prob[e.cls]);
    return admission.take();
}

RunResult run_fr(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                 const RunOptions& opts) {
    return run_periodic(inst, path, thin, /*thresholded=*/false, opts);
}

RunResult run_frt(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                  const RunOptions& opts) {
    return run_periodic(inst, path, thin, /*thresholded=*/true, opts);
}

RunResult run_ir(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                 const ResolveSchedule& schedule, const RunOptions& opts) {
    return run_scheduled(inst, path, thin, schedule, /*thresholded=*/false, opts);
}

RunResult run_irt(const Instance& inst, const ArrivalPath& path, SplitMix64& thin,
                  const ResolveSchedule& schedule, const RunOptions& opts) {
    return run_scheduled(inst, path, thin, schedule, /*thresholded=*/true, opts);
}

const char* decision_name(Decision d) noexcept {
    switch (d) {
        case Decision::Accept: return "accept";
        case Decision::RejectCoin: return "reject_coin";
        case Decision::RejectCapacity: return "reject_capacity";
    }
    return "?";
}

std::string trace_to_csv(const std::vector<TraceRow>& trace, std::size_t num_resources) {
    std::ostringstream out;
    out << "time,class,decision,prob";
    for (std::size_t l = 0; l < num_resources; ++l) out << ",cap_" << l;
    out << '\n';
    for (const TraceRow& row : trace) {
        out << detail::format_double(row.time) << ',' << row.cls << ','
            << decision_name(row.decision) << ',' << detail::format_double(row.prob);
        for (double c : row.remaining) out << ',' << detail::format_double(c);
        out << '\n';
    }
    return out.str();
}

RunResult run_policy(const Instance& inst, const ArrivalPath& path, const PolicySpec& spec,
                     const RunOptions& opts) {
    SplitMix64 thin(mix_seed(mix_seed(path.seed, stream_tag::thinning), spec.policy_id));
    switch (spec.kind) {
        case PolicyKind::Spa: return run_spa(inst, path, thin, opts);
        case PolicyKind::Fr: return run_fr(inst, path, thin, opts);
        case PolicyKind::Frt: return run_frt(inst, path, thin, opts);
        case PolicyKind::Ir: return run_ir(inst, path, thin, compute_schedule(inst.horizon), opts);
        case PolicyKind::Irt:
            return run_irt(inst, path, thin, compute_schedule(inst.horizon), opts);
    }
    throw Error(Errc::InvalidArgument, "unknown policy kind");
}

}  // namespace nrmlab
